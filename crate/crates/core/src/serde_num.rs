//! Serde helpers that write exact numbers as strings (`num/den` for rationals).

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serializer;

use crate::arith::fmt_ratio;

pub fn ratio<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_ratio(r))
}

pub fn ratio_vec<S: Serializer>(v: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(fmt_ratio))
}

pub fn bigint<S: Serializer>(n: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&n.to_string())
}

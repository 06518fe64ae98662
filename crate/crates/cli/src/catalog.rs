//! Fans of the scan corpus and seeded sampling of ample divisors on them.

use std::sync::Arc;

use rand::Rng;
use serde::Serialize;

use frobsesh_core::toric::{fans, is_ample, Fan, ToricDivisor};

/// A variety of the corpus, identified by its fan.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Variety {
    /// `P^n`, `n <= 4`.
    Projective { n: usize },
    /// `P^a x P^b`.
    Product { a: usize, b: usize },
    /// Hirzebruch surface `F_a`, `a <= 4`.
    Hirzebruch { a: i64 },
    /// `P^2` blown up at `k <= 3` fixed points.
    BlownUpPlane { k: usize },
    /// `P(O + O(a))` over `P^2`.
    PlaneBundle { a: i64 },
}

impl Variety {
    pub fn name(&self) -> String {
        match *self {
            Variety::Projective { n } => format!("P{n}"),
            Variety::Product { a, b } => format!("P{a}xP{b}"),
            Variety::Hirzebruch { a } => format!("F{a}"),
            Variety::BlownUpPlane { k } => format!("Bl{k}P2"),
            Variety::PlaneBundle { a } => format!("PB{a}"),
        }
    }

    pub fn dim(&self) -> usize {
        match *self {
            Variety::Projective { n } => n,
            Variety::Product { a, b } => a + b,
            Variety::Hirzebruch { .. } | Variety::BlownUpPlane { .. } => 2,
            Variety::PlaneBundle { .. } => 3,
        }
    }

    pub fn fan(&self) -> Fan {
        let built = match *self {
            Variety::Projective { n } => fans::projective_space(n),
            Variety::Product { a, b } => fans::projective_space(a)
                .and_then(|fa| fans::projective_space(b).and_then(|fb| fans::product(&fa, &fb))),
            Variety::Hirzebruch { a } => fans::hirzebruch(a),
            Variety::BlownUpPlane { k } => fans::blown_up_plane(k),
            Variety::PlaneBundle { a } => fans::projective_bundle_over_plane(a),
        };
        built.expect("catalog fans are valid")
    }
}

/// The whole catalog, surfaces first.
pub fn catalog() -> Vec<Variety> {
    let mut out = vec![Variety::Projective { n: 2 }, Variety::Product { a: 1, b: 1 }];
    out.extend((0..=4).map(|a| Variety::Hirzebruch { a }));
    out.extend((1..=3).map(|k| Variety::BlownUpPlane { k }));
    out.push(Variety::Projective { n: 1 });
    out.push(Variety::Projective { n: 3 });
    out.push(Variety::Product { a: 1, b: 2 });
    out.extend((0..=2).map(|a| Variety::PlaneBundle { a }));
    out.push(Variety::Projective { n: 4 });
    out
}

pub fn catalog_of_dim(dims: &[usize]) -> Vec<Variety> {
    catalog().into_iter().filter(|v| dims.contains(&v.dim())).collect()
}

/// Attempts per sample before giving up on a fan.
pub const MAX_ATTEMPTS: usize = 100_000;

/// Draws coefficients uniformly from `lo..=hi` until the divisor is ample.
/// `None` if no ample divisor turns up within [`MAX_ATTEMPTS`] draws.
pub fn sample_ample<R: Rng>(fan: &Arc<Fan>, lo: i64, hi: i64, rng: &mut R) -> Option<ToricDivisor> {
    let k = fan.num_rays();
    for _ in 0..MAX_ATTEMPTS {
        let coeffs: Vec<i64> = (0..k).map(|_| rng.random_range(lo..=hi)).collect();
        let d = ToricDivisor::from_i64(fan.clone(), &coeffs).expect("coefficient count matches");
        if is_ample(&d) {
            return Some(d);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn every_fan_is_valid_and_has_ample_divisors() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for v in catalog() {
            let fan = Arc::new(v.fan());
            assert!(fan.is_valid(), "{}", v.name());
            assert_eq!(fan.dim(), v.dim());
            let d = sample_ample(&fan, 0, 3, &mut rng);
            assert!(d.is_some(), "{}", v.name());
        }
    }

    #[test]
    fn sampling_is_seeded() {
        let fan = Arc::new(Variety::BlownUpPlane { k: 3 }.fan());
        let a = sample_ample(&fan, 0, 3, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        let b = sample_ample(&fan, 0, 3, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        assert_eq!(a, b);
    }
}

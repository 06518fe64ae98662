use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

use frobsesh_core::arith::big_pow;
use frobsesh_core::jetoracle::{separates, JetProblem, OracleConfig, QuotientBasis, QuotientKind};
use frobsesh_core::lattice::{det, invert_unimodular, solve_exact, LatticeVector, RationalVector, SquareIntMatrix};
use frobsesh_core::seshadri::{
    classical_jet_number, classical_seshadri, frobenius_jet_number, frobenius_seshadri, seshadri_report,
};
use frobsesh_core::toric::{
    chart_at, divisor_combine, fans, is_ample, is_globally_generated, is_gg_at, is_nef, polytope_of, Fan,
    ToricDivisor,
};

fn catalog() -> Vec<Arc<Fan>> {
    vec![
        Arc::new(fans::projective_space(1).unwrap()),
        Arc::new(fans::projective_space(2).unwrap()),
        Arc::new(fans::hirzebruch(0).unwrap()),
        Arc::new(fans::hirzebruch(1).unwrap()),
        Arc::new(fans::hirzebruch(3).unwrap()),
        Arc::new(fans::blown_up_plane(2).unwrap()),
        Arc::new(fans::blown_up_plane(3).unwrap()),
        Arc::new(fans::projective_space(3).unwrap()),
        Arc::new(fans::projective_bundle_over_plane(1).unwrap()),
    ]
}

fn ample_divisor() -> impl Strategy<Value = ToricDivisor> {
    let fans = catalog();
    (0..fans.len())
        .prop_flat_map(move |i| {
            let fan = fans[i].clone();
            let k = fan.num_rays();
            (Just(fan), prop::collection::vec(0i64..=4, k))
        })
        .prop_filter_map("not ample", |(fan, coeffs)| {
            let d = ToricDivisor::from_i64(fan, &coeffs).unwrap();
            is_ample(&d).then_some(d)
        })
}

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 48,
        max_global_rejects: 100_000,
        ..ProptestConfig::default()
    }
}

fn unimodular(n: usize) -> impl Strategy<Value = SquareIntMatrix> {
    // products of elementary matrices and sign flips
    prop::collection::vec((0..n, 0..n, -2i64..=2, any::<bool>()), 0..8).prop_map(move |ops| {
        let mut m = SquareIntMatrix::identity(n);
        for (i, j, c, flip) in ops {
            let mut e: Vec<Vec<i64>> = (0..n).map(|r| (0..n).map(|s| i64::from(r == s)).collect()).collect();
            if i != j {
                e[i][j] = c;
            }
            if flip {
                e[i][i] = -1;
                if i != j {
                    e[i][j] = 0;
                }
            }
            m = m.mul(&SquareIntMatrix::from_i64_rows(&e).unwrap()).unwrap();
        }
        m
    })
}

fn small_matrix(n: usize) -> impl Strategy<Value = SquareIntMatrix> {
    prop::collection::vec(prop::collection::vec(-5i64..=5, n), n)
        .prop_map(|rows| SquareIntMatrix::from_i64_rows(&rows).unwrap())
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn inverse_is_an_involution(m in (1usize..=4).prop_flat_map(unimodular)) {
        let inv = invert_unimodular(&m).unwrap();
        prop_assert_eq!(invert_unimodular(&inv).unwrap(), m.clone());
        prop_assert_eq!(m.mul(&inv).unwrap(), SquareIntMatrix::identity(m.dim()));
    }

    #[test]
    fn det_is_multiplicative((a, b) in (1usize..=4).prop_flat_map(|n| (small_matrix(n), small_matrix(n)))) {
        prop_assert_eq!(det(&a.mul(&b).unwrap()), det(&a) * det(&b));
        prop_assert_eq!(det(&a.transpose()), det(&a));
    }

    #[test]
    fn solve_round_trip(
        (m, x) in (1usize..=4).prop_flat_map(|n| (small_matrix(n), prop::collection::vec(-9i64..=9, n)))
    ) {
        prop_assume!(!det(&m).is_zero());
        let x = LatticeVector::from_i64(&x);
        prop_assert_eq!(solve_exact(&m, &m.mul_vec(&x).to_rational()).unwrap(), x.to_rational());
    }

    #[test]
    fn positivity_chain(d in ample_divisor()) {
        prop_assert!(is_nef(&d));
        prop_assert!(is_globally_generated(&d));
        let poly = polytope_of(&d).unwrap();
        prop_assert_eq!(poly.vertices.len(), d.fan().num_cones());
    }

    #[test]
    fn vertices_scale(d in ample_divisor(), m in 1i64..=4) {
        let dm = divisor_combine(&d, &d, &BigInt::from(m), &BigInt::zero()).unwrap();
        let scaled: Vec<RationalVector> = polytope_of(&d)
            .unwrap()
            .vertices
            .iter()
            .map(|v| v.scale(&BigRational::from_integer(m.into())))
            .collect();
        let mut scaled = scaled;
        scaled.sort();
        prop_assert_eq!(polytope_of(&dm).unwrap().vertices, scaled);
    }

    #[test]
    fn sandwich_and_homogeneity(d in ample_divisor()) {
        let n = BigRational::from_integer(BigInt::from(d.dim()));
        for cone in 0..d.fan().num_cones() {
            let (_, cp) = chart_at(&d, cone).unwrap();
            let eps = classical_seshadri(&cp).unwrap();
            let eps_f = frobenius_seshadri(&cp).unwrap();
            prop_assert!(&eps / &n <= eps_f && eps_f <= eps);
            if d.dim() == 1 {
                prop_assert_eq!(&eps, &eps_f);
            }
            for r in 1..=5i64 {
                let dr = divisor_combine(&d, &d, &BigInt::from(r), &BigInt::zero()).unwrap();
                let (_, cpr) = chart_at(&dr, cone).unwrap();
                let rr = BigRational::from_integer(r.into());
                prop_assert_eq!(classical_seshadri(&cpr).unwrap(), &eps * &rr);
                prop_assert_eq!(frobenius_seshadri(&cpr).unwrap(), &eps_f * &rr);
            }
        }
    }

    #[test]
    fn jet_numbers_are_monotone_and_bounded(d in ample_divisor(), p in prop::sample::select(vec![2u64, 3, 5])) {
        for cone in 0..d.fan().num_cones() {
            let (_, cp) = chart_at(&d, cone).unwrap();
            let eps_f = frobenius_seshadri(&cp).unwrap();
            let mut prev = 0;
            let mut attained = false;
            for m in 1..=60u64 {
                let e = frobenius_jet_number(&cp, m, p).unwrap();
                prop_assert!(e >= prev);
                prev = e;
                let ratio = BigRational::new(big_pow(p, e) - BigInt::one(), BigInt::from(m));
                prop_assert!(ratio <= eps_f);
                attained |= ratio == eps_f;
            }
            // eps_f = a/b is attained at m = b(p^e - 1)/a whenever that is an integer in range
            let (a, b) = (eps_f.numer().clone(), eps_f.denom().clone());
            for e in 1..=3u32 {
                let num = &b * (big_pow(p, e) - BigInt::one());
                if (&num % &a).is_zero() && &num / &a <= BigInt::from(60) {
                    prop_assert!(attained);
                }
            }
        }
    }

    #[test]
    fn relabel_invariance(
        (d, u, shift) in ample_divisor().prop_flat_map(|d| {
            let (n, k) = (d.dim(), d.fan().num_rays());
            (Just(d), unimodular(n), 0..k)
        })
    ) {
        let n = d.dim();
        let fan = d.fan();
        let k = fan.num_rays();
        let perm: Vec<usize> = (0..k).map(|i| (i + shift) % k).collect();
        // new ray perm[i] is U·(old ray i)
        let mut rays = vec![LatticeVector::zero(n); k];
        let mut coeffs = vec![BigInt::zero(); k];
        for i in 0..k {
            rays[perm[i]] = u.mul_vec(&fan.rays()[i]);
            coeffs[perm[i]] = d.coeffs()[i].clone();
        }
        let cones: Vec<Vec<usize>> = fan.max_cones().iter().map(|c| c.iter().map(|&i| perm[i]).collect()).collect();
        let moved = Fan::new(n, rays, cones).unwrap();
        prop_assert!(moved.is_valid());
        let moved = ToricDivisor::new(Arc::new(moved), coeffs).unwrap();
        prop_assert!(is_ample(&moved));
        for cone in 0..fan.num_cones() {
            prop_assert_eq!(is_gg_at(&moved, cone), is_gg_at(&d, cone));
            let a = seshadri_report(&chart_at(&d, cone).unwrap().1).unwrap();
            let b = seshadri_report(&chart_at(&moved, cone).unwrap().1).unwrap();
            prop_assert_eq!(a.epsilon, b.epsilon);
            prop_assert_eq!(a.epsilon_frobenius, b.epsilon_frobenius);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, max_global_rejects: 100_000, ..ProptestConfig::default() })]

    #[test]
    fn oracle_agrees_with_closed_forms(d in ample_divisor(), m in 1u64..=6, p in prop::sample::select(vec![2u64, 3])) {
        let cfg = OracleConfig::default();
        let problem = JetProblem::new(&d, m, cfg).unwrap();
        let n = d.dim() as u64;
        for cone in 0..d.fan().num_cones() {
            let (_, cp) = chart_at(&d, cone).unwrap();
            let s_f = frobenius_jet_number(&cp, m, p).unwrap();
            let s = classical_jet_number(&cp, m).unwrap();
            let mut prev = true;
            for e in 1..=2u32 {
                let q = p.pow(e);
                let frob = problem.separates(&[cone], QuotientKind::Frobenius { e }, p).unwrap();
                prop_assert_eq!(frob.surjective, e <= s_f);
                prop_assert_eq!(frob.membership_agrees, Some(true));
                // separation at e + 1 implies separation at e
                prop_assert!(prev || !frob.surjective);
                prev = frob.surjective;

                let big = problem.separates(&[cone], QuotientKind::Classical { ell: n * (q - 1) }, p).unwrap();
                let small = problem.separates(&[cone], QuotientKind::Classical { ell: q - 1 }, p).unwrap();
                prop_assert!(!big.surjective || frob.surjective);
                prop_assert!(!frob.surjective || small.surjective);
            }
            for ell in 0..=4u64 {
                let r = problem.separates(&[cone], QuotientKind::Classical { ell }, p).unwrap();
                prop_assert_eq!(r.surjective, BigInt::from(ell) <= s);
            }
        }
    }

    #[test]
    fn multi_point_separation_is_monotone(d in ample_divisor(), m in 1u64..=5, p in prop::sample::select(vec![2u64, 3])) {
        let problem = JetProblem::new(&d, m, OracleConfig::default()).unwrap();
        let k = d.fan().num_cones();
        let kind = QuotientKind::Frobenius { e: 1 };
        let z: Vec<usize> = (0..k.min(3)).collect();
        let whole = problem.separates(&z, kind, p).unwrap();
        for drop in 0..z.len() {
            let sub: Vec<usize> = z.iter().copied().filter(|&c| c != z[drop]).collect();
            if sub.is_empty() {
                continue;
            }
            let part = problem.separates(&sub, kind, p).unwrap();
            prop_assert!(!whole.surjective || part.surjective);
        }
        let mat = problem.restriction_matrix(&z, kind, p).unwrap();
        if mat.rows * mat.cols <= 4096 {
            prop_assert!(mat.rank_mod_p() <= mat.rank_over_q());
        }
        prop_assert_eq!(mat.rank_mod_p(), whole.rank);
    }

    #[test]
    fn oracle_separation_is_global_generation_at_e0(d in ample_divisor()) {
        // O/m^1 has a single monomial; it is hit iff the vertex is a lattice point.
        for cone in 0..d.fan().num_cones() {
            let r = separates(&d, 1, &[cone], QuotientKind::Classical { ell: 0 }, 2, OracleConfig::default()).unwrap();
            prop_assert_eq!(r.surjective, is_gg_at(&d, cone));
        }
    }
}

#[test]
fn containment_chain_of_quotient_bases() {
    for n in 1..=3usize {
        for p in [2u64, 3] {
            for e in 1..=2u32 {
                let q = p.pow(e);
                let set = |kind| {
                    QuotientBasis::new(kind, p, n, 1 << 20)
                        .unwrap()
                        .exponents()
                        .into_iter()
                        .collect::<std::collections::BTreeSet<_>>()
                };
                let low = set(QuotientKind::Classical { ell: q - 1 });
                let frob = set(QuotientKind::Frobenius { e });
                let high = set(QuotientKind::Classical { ell: n as u64 * (q - 1) });
                assert!(low.is_subset(&frob));
                assert!(frob.is_subset(&high));
            }
        }
    }
}

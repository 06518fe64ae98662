//! Constructors for the standard smooth complete fans used by tests and the
//! corpus scan.

use crate::error::{Error, Result};
use crate::lattice::LatticeVector;
use crate::toric::fan::Fan;

/// Fan of `P^n`: rays `e_1, …, e_n, -(e_1+…+e_n)`, cones all `n`-subsets.
///
/// Cone `i` omits ray `n - i`, so cone 0 is the positive orthant.
pub fn projective_space(n: usize) -> Result<Fan> {
    if n == 0 {
        return Err(Error::InvalidArgument("P^0 has no fan".into()));
    }
    let mut rays: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect();
    rays.push(vec![-1; n]);
    let cones = (0..=n)
        .rev()
        .map(|skip| (0..=n).filter(|&r| r != skip).collect())
        .collect();
    Fan::from_i64(n, &rays, cones)
}

/// Smooth complete 2-dimensional fan from rays listed counterclockwise;
/// consecutive rays span the maximal cones.
pub fn cyclic_surface(rays: &[[i64; 2]]) -> Result<Fan> {
    let k = rays.len();
    if k < 3 {
        return Err(Error::InvalidArgument("a complete surface fan needs at least 3 rays".into()));
    }
    let rays: Vec<Vec<i64>> = rays.iter().map(|r| r.to_vec()).collect();
    let cones = (0..k).map(|i| vec![i, (i + 1) % k]).collect();
    Fan::from_i64(2, &rays, cones)
}

/// Hirzebruch surface `F_a`.
pub fn hirzebruch(a: i64) -> Result<Fan> {
    cyclic_surface(&[[1, 0], [0, 1], [-1, a], [0, -1]])
}

/// Blow-up of `P^2` at `k ≤ 3` torus-fixed points.
pub fn blown_up_plane(k: usize) -> Result<Fan> {
    let rays: &[[i64; 2]] = match k {
        0 => &[[1, 0], [0, 1], [-1, -1]],
        1 => &[[1, 0], [1, 1], [0, 1], [-1, -1]],
        2 => &[[1, 0], [1, 1], [0, 1], [-1, 0], [-1, -1]],
        3 => &[[1, 0], [1, 1], [0, 1], [-1, 0], [-1, -1], [0, -1]],
        _ => return Err(Error::InvalidArgument(format!("blow-up of P^2 at {k} points"))),
    };
    cyclic_surface(rays)
}

/// The hexagon fan: rays `(1,0),(0,1),(-1,1),(-1,0),(0,-1),(1,-1)`, the
/// normal fan of the hexagon with vertices `(0,0),(1,0),(2,1),(2,2),(1,2),(0,1)`.
/// Its divisor `(0,0,1,2,2,1)` is anticanonical.
pub fn hexagon() -> Fan {
    cyclic_surface(&[[1, 0], [0, 1], [-1, 1], [-1, 0], [0, -1], [1, -1]]).expect("hexagon fan is valid")
}

/// Coefficients of the hexagon divisor on [`hexagon`].
pub const HEXAGON_COEFFS: [i64; 6] = [0, 0, 1, 2, 2, 1];

/// Product fan: rays `(v,0)` then `(0,w)`, cones unions.
pub fn product(a: &Fan, b: &Fan) -> Result<Fan> {
    let (n1, n2) = (a.dim(), b.dim());
    let mut rays = Vec::with_capacity(a.num_rays() + b.num_rays());
    for r in a.rays() {
        let mut c = r.coords().to_vec();
        c.resize(n1 + n2, 0.into());
        rays.push(LatticeVector::new(c));
    }
    for r in b.rays() {
        let mut c = vec![0.into(); n1];
        c.extend_from_slice(r.coords());
        rays.push(LatticeVector::new(c));
    }
    let off = a.num_rays();
    let mut cones = Vec::new();
    for ca in a.max_cones() {
        for cb in b.max_cones() {
            let mut c = ca.clone();
            c.extend(cb.iter().map(|&i| i + off));
            cones.push(c);
        }
    }
    Fan::new(n1 + n2, rays, cones)
}

/// `P(O ⊕ O(a))` over `P^2`.
pub fn projective_bundle_over_plane(a: i64) -> Result<Fan> {
    let rays = vec![
        vec![1, 0, 0],
        vec![0, 1, 0],
        vec![-1, -1, a],
        vec![0, 0, 1],
        vec![0, 0, -1],
    ];
    let base = [[0, 1], [1, 2], [2, 0]];
    let mut cones = Vec::new();
    for fiber in [3, 4] {
        for b in base {
            cones.push(vec![b[0], b[1], fiber]);
        }
    }
    Fan::from_i64(3, &rays, cones)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_fans_are_valid() {
        for n in 1..=4 {
            assert!(projective_space(n).unwrap().is_valid(), "P^{n}");
        }
        for a in 0..=4 {
            assert!(hirzebruch(a).unwrap().is_valid(), "F_{a}");
            assert!(projective_bundle_over_plane(a).unwrap().is_valid());
        }
        for k in 0..=3 {
            assert!(blown_up_plane(k).unwrap().is_valid(), "Bl_{k}");
        }
        assert!(hexagon().is_valid());
        let p1 = projective_space(1).unwrap();
        let p2 = projective_space(2).unwrap();
        let prod = product(&p1, &p2).unwrap();
        assert!(prod.is_valid());
        assert_eq!(prod.num_cones(), 6);
        assert_eq!(prod.dim(), 3);
    }

    #[test]
    fn first_cone_of_projective_space_is_orthant() {
        let f = projective_space(3).unwrap();
        assert_eq!(f.cone(0).unwrap(), &[0, 1, 2]);
        assert_eq!(f.num_cones(), 4);
    }
}

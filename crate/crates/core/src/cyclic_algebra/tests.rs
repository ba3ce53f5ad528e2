use proptest::prelude::*;

use super::*;
use crate::example::{binary_algebra, septic_algebra};
use crate::galois::Fq;
use crate::linalg::FqMatrix;

fn algebra(q: u64, d: usize) -> CyclicAlgebra {
    let f = Fq::from_order(q).unwrap();
    let ext = ExtField::new(f, d, 1).unwrap();
    CyclicAlgebra::new(ext, BasisChoice::Normal, BetaChoice::Auto).unwrap()
}

fn poly(v: &[u32]) -> Poly {
    Poly::from_coeffs(v.to_vec())
}

fn pm(rows: &[&[&[u32]]]) -> PolyMatrix {
    let n = rows.len();
    PolyMatrix::from_entries(n, rows.iter().flat_map(|r| r.iter().map(|c| poly(c))).collect())
}

#[test]
fn norm_forms() {
    assert_eq!(septic_algebra().norm_form().t, vec![1, 5, 1]);
    let bin = binary_algebra();
    assert_eq!(bin.norm_form().t, vec![1, 0, 1]);
    assert_eq!(bin.y(), &poly(&[0, 1, 0, 1]));
    let f7 = Fq::prime(7).unwrap();
    let trivial = ExtField::new(f7, 1, 1).unwrap();
    assert_eq!(norm_form(&trivial, &ExtElem(vec![3])).unwrap().t, vec![3]);
    let ext = bin.ext().clone();
    assert_eq!(
        norm_form(&ext, &ExtElem(vec![0, 1, 0])),
        Err(AlgebraError::TraceZero)
    );
}

#[test]
fn rho_examples() {
    let sep = septic_algebra();
    let alpha = sep.ext().generator();
    assert_eq!(
        sep.rho(&alpha).to_rows(),
        vec![vec![6, 3, 6], vec![5, 5, 6], vec![5, 3, 3]]
    );
    assert!(sep.rho(&sep.ext().one()).is_identity());
    // In the power basis, multiplication by v sends 1 ↦ v, v ↦ v², v² ↦ v+1.
    let bin = binary_algebra();
    let companion = FqMatrix::from_columns(&[vec![0, 1, 0], vec![0, 0, 1], vec![1, 1, 0]]);
    assert_eq!(bin.rho(&bin.ext().generator()), companion);
}

#[test]
fn phi_matrices() {
    let sep = septic_algebra();
    assert_eq!(
        sep.phi_matrix().to_rows(),
        vec![vec![0, 0, 1], vec![1, 0, 0], vec![0, 1, 0]]
    );
    let bin = binary_algebra();
    assert_eq!(
        bin.phi_matrix().to_rows(),
        vec![vec![1, 0, 0], vec![0, 0, 1], vec![0, 1, 1]]
    );
    for alg in [sep, bin, algebra(3, 3), algebra(4, 2)] {
        let f = alg.ext().base().clone();
        assert!(alg.phi_matrix().pow(alg.d() as u64, &f).is_identity());
    }
}

#[test]
fn z_matrices() {
    let sep = septic_algebra();
    let expected = pm(&[
        &[&[0, 3], &[0, 6], &[1, 4]],
        &[&[1, 3], &[0, 6], &[0, 5]],
        &[&[0, 3], &[1, 1], &[0, 5]],
    ]);
    assert_eq!(sep.z_matrix().mat, expected);
    let r = sep.ring();
    assert_eq!(
        sep.z_matrix().mat.pow(3, r),
        PolyMatrix::scalar(3, poly(&[1, 1, 5, 1]))
    );
    let bin = binary_algebra();
    let expected = pm(&[
        &[&[1, 1], &[0, 1], &[0, 1]],
        &[&[0, 1], &[0, 1], &[1]],
        &[&[], &[1, 1], &[1]],
    ]);
    assert_eq!(bin.z_matrix().mat, expected);
}

#[test]
fn z_twists_multiplication() {
    for alg in [septic_algebra(), binary_algebra(), algebra(3, 2), algebra(4, 2)] {
        let r = alg.ring();
        let z = alg.z_matrix().mat;
        for c in alg.ext().elements().skip(1).take(20) {
            let lhs = z.mul(&PolyMatrix::from_constant(&alg.rho(&c)), r);
            let rhs = PolyMatrix::from_constant(&alg.rho(&alg.ext().frobenius(&c, 1))).mul(&z, r);
            assert_eq!(lhs, rhs);
        }
        let d = alg.d() as u64;
        assert_eq!(
            z.pow(d, r),
            PolyMatrix::scalar(alg.d(), alg.one_plus_y().clone())
        );
    }
}

#[test]
fn b_one_numerator() {
    let bin = binary_algebra();
    let b = bin.b_matrix(&bin.ext().one()).unwrap();
    assert_eq!(b.den_pow, 1);
    let expected = pm(&[
        &[&[0, 1, 0, 1], &[0, 0, 1], &[0, 1, 1]],
        &[&[0, 1], &[0, 0, 0, 1], &[1, 1, 1]],
        &[&[0, 1, 1], &[1, 0, 1], &[1, 0, 0, 1]],
    ]);
    assert_eq!(b.mat, expected);
    assert_eq!(bin.b_matrix(&bin.ext().zero()).unwrap_err(), AlgebraError::ZeroU);
}

#[test]
fn determinant_is_y_over_one_plus_y() {
    for alg in [binary_algebra(), algebra(3, 2), algebra(2, 2)] {
        let r = alg.ring();
        let expected = r.rational(alg.y().clone(), alg.one_plus_y().clone()).unwrap();
        for g in alg.generators() {
            assert_eq!(g.det(alg.one_plus_y(), r), expected);
            let d = alg.d() as u64;
            assert_eq!(
                g.mat.det(r),
                r.mul(alg.y(), &r.pow(alg.one_plus_y(), d - 1))
            );
        }
    }
}

#[test]
fn generators_follow_cosets() {
    for alg in [binary_algebra(), algebra(3, 2), algebra(4, 2), algebra(3, 3)] {
        let r = alg.ring();
        let q = alg.q();
        let d = alg.d() as u32;
        assert_eq!(alg.coset_reps().len() as u32, (q.pow(d) - 1) / (q - 1));
        let keys: Vec<_> = alg.generators().iter().map(|g| g.projective_key(r)).collect();
        let mut unique = keys.clone();
        unique.sort();
        unique.dedup();
        assert_eq!(unique.len(), keys.len());
        for u in alg.ext().elements().skip(1) {
            let idx = alg.coset_index(&u).unwrap();
            assert_eq!(alg.b_matrix(&u).unwrap().projective_key(r), keys[idx]);
        }
    }
}

#[test]
fn u_to_r_convention() {
    let bin = binary_algebra();
    let ext = bin.ext().clone();
    assert_eq!(bin.u_to_r(&ext.one()).unwrap(), ext.one());
    let v = ext.generator();
    assert_eq!(bin.u_to_r(&v).unwrap(), ExtElem(vec![0, 1, 1]));
    for alg in [bin, septic_algebra(), algebra(3, 2), algebra(4, 2)] {
        let r = alg.ring();
        for u in alg.ext().elements().skip(1) {
            let rr = alg.u_to_r(&u).unwrap();
            assert_eq!(alg.ext().norm(&rr), 1);
            assert!(alg
                .b_matrix(&u)
                .unwrap()
                .equals(&alg.b_r_matrix(&rr).unwrap(), alg.one_plus_y(), r));
            let back = alg.r_to_u(&rr).unwrap();
            assert_eq!(alg.coset_index(&back), alg.coset_index(&u));
        }
    }
    let sep = septic_algebra();
    assert_eq!(
        sep.r_to_u(&sep.ext().from_base(3)),
        Err(AlgebraError::NormNotOne)
    );
}

fn norm_one(alg: &CyclicAlgebra) -> Vec<ExtElem> {
    alg.ext()
        .elements()
        .filter(|a| !a.is_zero() && alg.ext().norm(a) == 1)
        .collect()
}

#[test]
fn pair_completion_matches_search() {
    let alg = binary_algebra();
    let r = alg.ring();
    let rs = norm_one(&alg);
    assert_eq!(rs.len(), 7);
    let mats: Vec<LocalizedMatrix> = rs.iter().map(|x| alg.b_r_matrix(x).unwrap()).collect();
    let mut checked = 0;
    for (i, a) in rs.iter().enumerate() {
        for (j, b) in rs.iter().enumerate() {
            if i == j {
                continue;
            }
            let (a2, b2) = alg.pair_completion(a, b).unwrap();
            assert_eq!(alg.ext().add(a, &a2), alg.ext().add(b, &b2));
            assert_eq!(
                alg.ext().mul(a, &alg.ext().frobenius(&a2, -1)),
                alg.ext().mul(b, &alg.ext().frobenius(&b2, -1))
            );
            let found: Vec<(usize, usize)> = (0..rs.len())
                .flat_map(|x| (0..rs.len()).map(move |y| (x, y)))
                .filter(|&(x, y)| {
                    mats[i]
                        .mul(&mats[x], r)
                        .equals(&mats[j].mul(&mats[y], r), alg.one_plus_y(), r)
                })
                .collect();
            let ia2 = rs.iter().position(|e| *e == a2).unwrap();
            let ib2 = rs.iter().position(|e| *e == b2).unwrap();
            assert_eq!(found, vec![(ia2, ib2)]);
            checked += 1;
        }
    }
    assert_eq!(checked, 42);
}

#[test]
fn d2_inverse_rule() {
    let alg = algebra(3, 2);
    let r = alg.ring();
    assert_eq!(
        alg.pair_completion(&alg.ext().one(), &alg.ext().one()),
        Err(AlgebraError::DegenerateD2)
    );
    for x in norm_one(&alg) {
        let neg = alg.inverse_rule_d2(&x);
        let prod = alg
            .b_r_matrix(&neg)
            .unwrap()
            .mul(&alg.b_r_matrix(&x).unwrap(), r);
        let c = alg.ext().to_base(&alg.ext().mul(&x, &alg.ext().frobenius(&x, 1))).unwrap();
        let expected = r
            .rational(
                r.sub(alg.one_plus_y(), &Poly::constant(c)),
                alg.one_plus_y().clone(),
            )
            .unwrap();
        assert_eq!(prod.scalar_value(alg.one_plus_y(), r), Some(expected));
    }
}

/// Brute-force scan of all N^d products.
fn all_scalar_products(alg: &CyclicAlgebra) -> Vec<Vec<usize>> {
    let r = alg.ring();
    let gens = alg.generators();
    let n = gens.len();
    let d = alg.d();
    let mut out = Vec::new();
    for code in 0..n.pow(d as u32) {
        let mut t = Vec::with_capacity(d);
        let mut c = code;
        for _ in 0..d {
            t.push(c % n);
            c /= n;
        }
        t.reverse();
        let prod = t
            .iter()
            .fold(LocalizedMatrix::identity(d), |acc, &i| acc.mul(&gens[i], r));
        if prod.is_scalar() {
            out.push(t);
        }
    }
    out
}

#[test]
fn relations_match_exhaustive_scan() {
    for alg in [binary_algebra(), algebra(3, 2), algebra(2, 2)] {
        let p = relations_p(&alg);
        assert_eq!(p, all_scalar_products(&alg));
        for t in &p {
            let mut rot = t.clone();
            rot.rotate_left(1);
            assert!(p.contains(&rot));
        }
    }
    let p = relations_p(&binary_algebra());
    assert_eq!(p.len(), 21);
    assert!(p.contains(&vec![0, 3, 1]));
}

#[test]
fn listed_pair_relations() {
    let alg = binary_algebra();
    let r = alg.ring();
    let b = alg.generators();
    let prod = |i: usize, j: usize| b[i % 7].mul(&b[j % 7], r);
    for s in 0..7 {
        for chain in [[(0, 3), (4, 2), (6, 5)], [(0, 5), (2, 1), (3, 6)], [(0, 6), (1, 4), (5, 3)]] {
            let first = prod(chain[0].0 + s, chain[0].1 + s);
            for &(i, j) in &chain[1..] {
                assert!(first.equals(&prod(i + s, j + s), alg.one_plus_y(), r));
            }
        }
        let word = prod(s, 3 + s).mul(&b[(1 + s) % 7], r);
        assert!(word.is_scalar());
    }
}

#[test]
fn header_set_sizes() {
    let bin = binary_algebra();
    let h = header_sets(&bin, &relations_p(&bin));
    assert_eq!(h.sizes(), vec![7, 7]);
    let r = bin.ring();
    // S_2 consists of inverses of S_1.
    for s2 in h.get(2) {
        let hit = h
            .get(1)
            .iter()
            .any(|s1| s1.mat.mul(&s2.mat, r).is_scalar());
        assert!(hit);
    }
    let alg = algebra(3, 2);
    assert_eq!(header_sets(&alg, &relations_p(&alg)).sizes(), vec![4]);
}

#[test]
fn reld() {
    assert_eq!(algebra(2, 2).reld_check(), Ok(true));
    assert_eq!(algebra(3, 3).reld_check(), Ok(true));
    assert_eq!(
        binary_algebra().reld_check(),
        Err(AlgebraError::NotCharPower { d: 3, p: 2 })
    );
}

#[test]
fn rewriting_connects_relations() {
    let alg = binary_algebra();
    let p = relations_p(&alg);
    let report = rewrite_search(&alg, &p);
    assert_eq!(report.total, 21);
    assert_eq!(report.reached, 21);
    assert!(report.depth >= 1);
}

#[test]
fn algebra_relations_hold() {
    let alg = septic_algebra();
    let z = alg.elem_z();
    let d = alg.d() as u32;
    let zd = alg.elem_pow(&z, d);
    let one_plus_y = alg
        .ring()
        .rat_from_poly(Poly::from_coeffs(vec![1, 1]));
    assert_eq!(zd, alg.elem_scale(&one_plus_y, &alg.elem_one()));
    for c in alg.ext().elements().skip(1).take(30) {
        let lhs = alg.elem_mul(&z, &alg.elem_monomial(&c, 0));
        let rhs = alg.elem_monomial(&alg.ext().frobenius(&c, 1), 1);
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn b_inverse_closed_form() {
    let alg = binary_algebra();
    let ext = alg.ext().clone();
    let r = alg.ring();
    let inv_y = r.rational(Poly::one(), Poly::x()).unwrap();
    for u in alg.coset_reps() {
        let b = alg.b_unit(u).unwrap();
        let mut sum = alg.elem_zero();
        for i in 0..alg.d() {
            let c = ext.div(u, &ext.frobenius(u, i as i64)).unwrap();
            sum = alg.elem_add(&sum, &alg.elem_monomial(&c, i));
        }
        let expected = alg.elem_add(&alg.elem_one(), &alg.elem_scale(&inv_y, &sum));
        assert_eq!(b.inv, expected);
    }
}

#[test]
fn conjugation_representation() {
    let alg = binary_algebra();
    let one = alg.unit(alg.elem_one()).unwrap();
    assert!(alg.conj_rep(&one).is_identity());
    let units: Vec<Unit> = alg
        .coset_reps()
        .iter()
        .map(|u| alg.b_unit(u).unwrap())
        .collect();
    let reps: Vec<ConjMatrix> = units.iter().map(|u| alg.conj_rep(u)).collect();
    for c in &reps {
        assert!(c.entries_in_inverse_y());
    }
    for (i, j) in [(0, 1), (3, 5), (6, 6)] {
        let prod = alg.unit_mul(&units[i], &units[j]);
        assert_eq!(alg.conj_rep(&prod), reps[i].mul(&reps[j], &alg));
    }
    // The relation b_0 b_3 b_1 = 1 holds exactly up to the central factor.
    let word = alg.unit_mul(&alg.unit_mul(&units[0], &units[3]), &units[1]);
    assert!(alg.conj_rep(&word).is_identity());
    let not_unit = alg.elem_add(&alg.elem_z(), &alg.elem_pow(&alg.elem_z(), 2));
    assert_eq!(alg.unit(not_unit), Err(AlgebraError::NotInvertible));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn det_identity_random_beta(which in 0usize..3, beta_idx in 1u128..49) {
        let (q, d) = [(2u64, 3usize), (3, 2), (7, 2)][which];
        let f = Fq::from_order(q).unwrap();
        let ext = ExtField::new(f, d, 1).unwrap();
        let beta = ext.from_index(beta_idx % ext.order());
        prop_assume!(!beta.is_zero() && ext.trace(&beta) != 0);
        let alg = CyclicAlgebra::new(ext, BasisChoice::Normal, BetaChoice::Explicit(beta)).unwrap();
        let r = alg.ring();
        let expected = r.rational(alg.y().clone(), alg.one_plus_y().clone()).unwrap();
        prop_assert_eq!(
            alg.z_matrix().mat.pow(d as u64, r),
            PolyMatrix::scalar(d, alg.one_plus_y().clone())
        );
        for g in alg.generators() {
            prop_assert_eq!(g.det(alg.one_plus_y(), r), expected.clone());
        }
    }
}

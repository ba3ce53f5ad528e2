//! The two worked examples: q = 2, d = 3 over F_8 = F_2[v]/(v³+v+1) with the
//! power basis and β = 1+v, and q = 7, d = 3 over F_7(∛2) with the normal
//! basis of 1+α+α² and β = α−2.
//!
//! `TABLE` holds the expected generator data for the first example: for each
//! b_i = b_{v^i}, the numerator of its 3×3 image over 1+y(x), then the 9×9
//! conjugation matrix written as A + (1/y)B.

use std::fmt::Write as _;
use std::sync::Arc;

use crate::cyclic_algebra::{AlgebraError, BasisChoice, BetaChoice, CyclicAlgebra, PolyMatrix};
use crate::galois::{ExtElem, ExtField, Fq};
use crate::polyring::Poly;

pub const TABLE: &str = include_str!("../data/example_table.txt");

pub fn binary_algebra() -> CyclicAlgebra {
    let f2 = Fq::prime(2).expect("2 is prime");
    let ext = ExtField::with_modulus(f2, Poly::from_coeffs(vec![1, 1, 0, 1]), 1)
        .expect("v³+v+1 is irreducible");
    CyclicAlgebra::new(
        ext,
        BasisChoice::Power,
        BetaChoice::Explicit(ExtElem(vec![1, 1, 0])),
    )
    .expect("valid parameters")
}

pub fn septic_field() -> Arc<ExtField> {
    let f7 = Fq::prime(7).expect("7 is prime");
    ExtField::with_modulus(f7, Poly::from_coeffs(vec![5, 0, 0, 1]), 1)
        .expect("λ³−2 is irreducible over F_7")
}

pub fn septic_algebra() -> CyclicAlgebra {
    CyclicAlgebra::new(
        septic_field(),
        BasisChoice::NormalFrom(ExtElem(vec![1, 1, 1])),
        BetaChoice::Explicit(ExtElem(vec![5, 1, 0])),
    )
    .expect("valid parameters")
}

/// ρ(α) in the septic example.
pub const SEPTIC_RHO_ALPHA: [[u32; 3]; 3] = [[6, 3, 6], [5, 5, 6], [5, 3, 3]];

/// ρ(z) in the septic example, entries as ascending coefficients in x.
pub const SEPTIC_Z: [[[u32; 2]; 3]; 3] = [
    [[0, 3], [0, 6], [1, 4]],
    [[1, 3], [0, 6], [0, 5]],
    [[0, 3], [1, 1], [0, 5]],
];

/// 1 + x − 2x² + x³ over F_7, the scalar value of ρ(z)³.
pub const SEPTIC_Z_CUBE: [u32; 4] = [1, 1, 5, 1];

/// Named checks of the septic example: ρ(α), ρ(z), and ρ(z)³.
pub fn septic_checks(alg: &CyclicAlgebra) -> Vec<(&'static str, bool)> {
    let rho = alg.rho(&alg.ext().generator()).to_rows();
    let want_rho: Vec<Vec<u32>> = SEPTIC_RHO_ALPHA.iter().map(|r| r.to_vec()).collect();
    let z = alg.z_matrix();
    let want_z = PolyMatrix::from_entries(
        3,
        SEPTIC_Z
            .iter()
            .flatten()
            .map(|c| Poly::from_coeffs(c.to_vec()))
            .collect(),
    );
    let cube = z.mat.pow(3, alg.ring());
    let scalar = PolyMatrix::scalar(3, Poly::from_coeffs(SEPTIC_Z_CUBE.to_vec()));
    vec![
        ("rho_alpha", rho == want_rho),
        ("rho_z", z.den_pow == 0 && z.mat == want_z),
        ("rho_z_cubed", cube == scalar),
    ]
}

fn digit_row(row: &[u32]) -> String {
    row.iter().map(|c| c.to_string()).collect()
}

/// Renders the generator table in the layout of `TABLE`.
pub fn render_table(alg: &CyclicAlgebra) -> Result<String, AlgebraError> {
    let ext = alg.ext();
    let v = ext.generator();
    let count = alg.coset_reps().len();
    let mut out = String::new();
    for i in 0..count {
        let u = ext.pow(&v, i as u128);
        let b = alg.b_matrix(&u)?;
        writeln!(out, "b_{i}").unwrap();
        for line in b.mat.render("x") {
            writeln!(out, "{line}").unwrap();
        }
        let conj = alg.conj_rep(&alg.b_unit(&u)?);
        let (a, bm) = conj.split_laurent().ok_or(AlgebraError::NotInvertible)?;
        writeln!(out, "A").unwrap();
        for row in a.to_rows() {
            writeln!(out, "{}", digit_row(&row)).unwrap();
        }
        writeln!(out, "B").unwrap();
        for row in bm.to_rows() {
            writeln!(out, "{}", digit_row(&row)).unwrap();
        }
        if i + 1 < count {
            out.push('\n');
        }
    }
    Ok(out)
}

/// Lines where `rendered` differs from `TABLE`, as (line number, expected, got).
pub fn diff_table(rendered: &str) -> Vec<(usize, String, String)> {
    let want: Vec<&str> = TABLE.lines().collect();
    let got: Vec<&str> = rendered.lines().collect();
    (0..want.len().max(got.len()))
        .filter_map(|i| {
            let w = want.get(i).copied().unwrap_or("");
            let g = got.get(i).copied().unwrap_or("");
            (w != g).then(|| (i + 1, w.to_string(), g.to_string()))
        })
        .collect()
}

//! Classical (q = 1) oracle: defining-representation matrices for the small
//! Cartan types, the involution's iterated-bracket images on Chevalley
//! generators, and explicit matrix involutions for the catalog pairs.
//!
//! Everything here is independent of the quantum machinery — plain matrix
//! brackets over the rationals — so agreement of a specialized quantum
//! computation with these values is a real cross-check, not a tautology.

use crate::error::Error;
use crate::involution::ThetaData;
use crate::linalg::{rmat_add, rmat_bracket, rmat_is_zero, rmat_mul, rmat_scale, rmat_sub, rmat_zero, RMat};
use crate::qfield::specialize_q1;
use crate::rootdata::{DiagramMap, RootDatum};
use crate::uq::Element;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

fn rat(k: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(k))
}

// ---------------------------------------------------------------------------
// defining representations
// ---------------------------------------------------------------------------

/// Matrix realization of a root datum in its defining representation.
/// `pos[i]` is the row of the 1 in e_i = E_{pos[i], pos[i]+1}; consecutive
/// index ranges form the diagonal blocks of a semisimple sum.
#[derive(Debug, Clone)]
pub struct MatrixRealization {
    pub label: String,
    pub size: usize,
    pos: Vec<usize>,
    blocks: Vec<(usize, usize)>,
}

impl MatrixRealization {
    pub fn new(datum: &RootDatum) -> Result<Self, Error> {
        let norm = datum.label.trim().to_ascii_uppercase().replace('*', "X");
        if norm == "A1XA1" {
            return Ok(MatrixRealization {
                label: datum.label.clone(),
                size: 4,
                pos: vec![0, 2],
                blocks: vec![(0, 2), (2, 2)],
            });
        }
        if let Some(rank) = norm.strip_prefix('A').and_then(|r| r.parse::<usize>().ok()) {
            if rank >= 1 && rank == datum.n {
                return Ok(MatrixRealization {
                    label: datum.label.clone(),
                    size: rank + 1,
                    pos: (0..rank).collect(),
                    blocks: vec![(0, rank + 1)],
                });
            }
        }
        Err(Error::Validation(format!(
            "no classical matrix realization for Cartan label '{}'",
            datum.label
        )))
    }

    pub fn zero(&self) -> RMat {
        rmat_zero(self.size, self.size)
    }

    pub fn identity(&self) -> RMat {
        let mut m = self.zero();
        for i in 0..self.size {
            m[i][i] = BigRational::one();
        }
        m
    }

    fn unit(&self, r: usize, c: usize) -> RMat {
        let mut m = self.zero();
        m[r][c] = BigRational::one();
        m
    }

    pub fn e(&self, i: usize) -> RMat {
        self.unit(self.pos[i], self.pos[i] + 1)
    }

    pub fn f(&self, i: usize) -> RMat {
        self.unit(self.pos[i] + 1, self.pos[i])
    }

    pub fn h(&self, i: usize) -> RMat {
        let mut m = self.zero();
        let p = self.pos[i];
        m[p][p] = BigRational::one();
        m[p + 1][p + 1] = -BigRational::one();
        m
    }

    /// h_lambda = sum c_i h_i for lambda = sum c_i alpha_i (simply laced, so
    /// coroot coordinates agree with root coordinates).
    pub fn coroot(&self, coords: &[i64]) -> RMat {
        let mut m = self.zero();
        for (i, &c) in coords.iter().enumerate() {
            if c != 0 {
                m = rmat_add(&m, &rmat_scale(&self.h(i), &rat(c)));
            }
        }
        m
    }

    /// Split a matrix in g + C1 into its traceless part and the per-block
    /// scalar multiples of the block identity.  Returns None when some block
    /// carries a different scalar than the others (not in g + C1).
    pub fn traceless_split(&self, m: &RMat) -> Option<(RMat, BigRational)> {
        let mut scalar: Option<BigRational> = None;
        for &(off, sz) in &self.blocks {
            let mut tr = BigRational::zero();
            for k in off..off + sz {
                tr += &m[k][k];
            }
            let t = tr / rat(sz as i64);
            match &scalar {
                None => scalar = Some(t),
                Some(s) if *s == t => {}
                Some(_) => return None,
            }
        }
        let s = scalar.unwrap_or_else(BigRational::zero);
        let mut out = m.clone();
        for k in 0..self.size {
            out[k][k] -= &s;
        }
        Some((out, s))
    }
}

// ---------------------------------------------------------------------------
// iterated-bracket images of the involution
// ---------------------------------------------------------------------------

/// (ad g)^m / m! for each (j, m) in `chain`, first entry acting first.
fn divided_chain(
    real: &MatrixRealization,
    chain: &[(usize, u32)],
    start: RMat,
    raising: bool,
) -> RMat {
    let mut acc = start;
    for &(j, m) in chain {
        let g = if raising { real.e(j) } else { real.f(j) };
        let mut fact = BigRational::one();
        for k in 1..=m {
            acc = rmat_bracket(&g, &acc);
            fact *= rat(i64::from(k));
        }
        acc = rmat_scale(&acc, &fact.recip());
    }
    acc
}

fn paper_chain(td: &ThetaData, i: usize, reversed: bool) -> Vec<(usize, u32)> {
    let seq = &td.sequences[&i];
    let it = seq.indices.iter().copied().zip(seq.powers.iter().copied());
    // the bracket formulas apply the rightmost listed factor first, so the
    // stored order (i_1 .. i_r) is applied back to front
    if reversed {
        it.collect()
    } else {
        it.rev().collect()
    }
}

/// theta(f_i) as an iterated bracket: (ad e_{i_1}^{(m_1)} .. e_{i_r}^{(m_r)}) e_{p(i)}
/// for i in pi*, the reversed-sequence form with sign for the partner, f_i itself
/// on the fixed subsystem.
pub fn theta_f(td: &ThetaData, real: &MatrixRealization, i: usize) -> RMat {
    if td.pi_theta.contains(&i) {
        return real.f(i);
    }
    if td.sequences.contains_key(&i) {
        divided_chain(real, &paper_chain(td, i, false), real.e(td.p[i]), true)
    } else {
        let star = td.p[i];
        let m = divided_chain(real, &paper_chain(td, star, true), real.e(star), true);
        let sign = if td.m_of[&star] % 2 == 1 { -1 } else { 1 };
        rmat_scale(&m, &rat(sign))
    }
}

/// theta(e_i) = (-1)^{m(i)} (ad f_{i_1}^{(m_1)} .. f_{i_r}^{(m_r)}) f_{p(i)} and
/// its partner form without the sign.
pub fn theta_e(td: &ThetaData, real: &MatrixRealization, i: usize) -> RMat {
    if td.pi_theta.contains(&i) {
        return real.e(i);
    }
    if td.sequences.contains_key(&i) {
        let m = divided_chain(real, &paper_chain(td, i, false), real.f(td.p[i]), false);
        let sign = if td.m_of[&i] % 2 == 1 { -1 } else { 1 };
        rmat_scale(&m, &rat(sign))
    } else {
        let star = td.p[i];
        divided_chain(real, &paper_chain(td, star, true), real.f(star), false)
    }
}

/// theta on the Cartan subalgebra: h_lambda goes to h_{Theta(lambda)}.
pub fn theta_h(td: &ThetaData, real: &MatrixRealization, coords: &[i64]) -> RMat {
    real.coroot(&td.theta.apply(coords))
}

// ---------------------------------------------------------------------------
// matrix involutions for the catalog pairs
// ---------------------------------------------------------------------------

/// Matrix-level involution realizing a catalog datum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClassicalTheta {
    /// M -> -(DMD)^T with D = diag(1,-1,1,..): e_i <-> f_i, h -> -h (split)
    SplitSwap,
    /// M -> JMJ with J the index-reversal permutation: e_i <-> f_{n+1-i}
    Reversal,
    /// two sl2 blocks: swap the blocks, then SplitSwap inside each
    BlockSwap,
}

impl ClassicalTheta {
    pub fn apply(&self, real: &MatrixRealization, m: &RMat) -> RMat {
        let n = real.size;
        match self {
            ClassicalTheta::SplitSwap => {
                let mut out = rmat_zero(n, n);
                for i in 0..n {
                    for j in 0..n {
                        let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
                        out[j][i] = &m[i][j] * rat(-sign);
                    }
                }
                out
            }
            ClassicalTheta::Reversal => {
                let mut out = rmat_zero(n, n);
                for i in 0..n {
                    for j in 0..n {
                        out[i][j] = m[n - 1 - i][n - 1 - j].clone();
                    }
                }
                out
            }
            ClassicalTheta::BlockSwap => {
                let swap = |k: usize| (k + 2) % 4;
                let mut out = rmat_zero(n, n);
                for i in 0..n {
                    for j in 0..n {
                        let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
                        out[swap(j)][swap(i)] = &m[i][j] * rat(-sign);
                    }
                }
                out
            }
        }
    }
}

/// The matrix involution behind a validated datum, where the catalog has one.
/// Data violating the parity property (odd m(i) with p(i) = i) provably admit
/// no involutive automorphism with the required restriction, so they yield
/// None, as do shapes outside the catalog.
pub fn catalog_involution(td: &ThetaData) -> Option<ClassicalTheta> {
    if !td.parity_ok() || !td.pi_theta.is_empty() {
        return None;
    }
    let norm = td.datum.label.trim().to_ascii_uppercase().replace('*', "X");
    let a_series = norm.starts_with('A') && norm != "A1XA1";
    match (&td.d, a_series, norm.as_str()) {
        (DiagramMap::Id, true, _) => Some(ClassicalTheta::SplitSwap),
        (DiagramMap::Flip, true, _) if td.datum.n == 1 => Some(ClassicalTheta::SplitSwap),
        (DiagramMap::Flip, true, _) => Some(ClassicalTheta::Reversal),
        (DiagramMap::Flip, false, "A1XA1") => Some(ClassicalTheta::BlockSwap),
        _ => None,
    }
}

// ---------------------------------------------------------------------------
// specialization of quantum elements
// ---------------------------------------------------------------------------

/// Evaluate an Element at q = 1 inside the defining representation:
/// y_i -> f_i, x_i -> e_i, every torus factor -> identity.  Faithful on
/// images lying in g + C1, which is where all specialized catalog
/// generators land.
pub fn specialize_element(real: &MatrixRealization, a: &Element) -> Result<RMat, Error> {
    let mut out = real.zero();
    for (w, c) in &a.terms {
        let c1 = specialize_q1(c)?;
        if c1.is_zero() {
            continue;
        }
        let mut m = real.identity();
        for &l in &w.y {
            m = rmat_mul(&m, &real.f(l as usize));
        }
        for &l in &w.x {
            m = rmat_mul(&m, &real.e(l as usize));
        }
        out = rmat_add(&out, &rmat_scale(&m, &c1));
    }
    Ok(out)
}

/// q = 1 image of theta~(y_i) predicted classically: the right adjoint picks
/// up one minus sign per chain letter, so the image is (-1)^{m(i)} theta(f_i)
/// (chain orders agree for the catalog sequences).
pub fn predicted_specialization(td: &ThetaData, real: &MatrixRealization, i: usize) -> RMat {
    let m = theta_f(td, real, i);
    if td.m_of.get(&i).copied().unwrap_or(0) % 2 == 1 {
        rmat_scale(&m, &rat(-1))
    } else {
        m
    }
}

pub fn mats_equal(a: &RMat, b: &RMat) -> bool {
    rmat_is_zero(&rmat_sub(a, b))
}

/// Render a matrix in g + C1 as a combination of Chevalley generators,
/// falling back to matrix units E[r,c] for anything outside their span.
pub fn expression_string(real: &MatrixRealization, m: &RMat) -> String {
    let (mut work, scalar) = match real.traceless_split(m) {
        Some(t) => t,
        None => (m.clone(), BigRational::zero()),
    };
    let mut parts: Vec<(BigRational, String)> = Vec::new();
    let rank = real.pos.len();
    for i in 0..rank {
        let (r, c) = (real.pos[i], real.pos[i] + 1);
        let co = work[r][c].clone();
        if !co.is_zero() {
            parts.push((co.clone(), format!("e{}", i + 1)));
            work = rmat_sub(&work, &rmat_scale(&real.e(i), &co));
        }
        let co = work[c][r].clone();
        if !co.is_zero() {
            parts.push((co.clone(), format!("f{}", i + 1)));
            work = rmat_sub(&work, &rmat_scale(&real.f(i), &co));
        }
    }
    let diag: Vec<BigRational> = (0..real.size).map(|k| work[k][k].clone()).collect();
    if diag.iter().any(|x| !x.is_zero()) {
        // express the diagonal over the h_i when possible
        let rows: RMat = (0..real.size)
            .map(|k| (0..rank).map(|i| real.h(i)[k][k].clone()).collect())
            .collect();
        if let Some(sol) = crate::linalg::rmat_solve(&rows, &diag) {
            for (i, co) in sol.iter().enumerate() {
                if !co.is_zero() {
                    parts.push((co.clone(), format!("h{}", i + 1)));
                    work = rmat_sub(&work, &rmat_scale(&real.h(i), co));
                }
            }
        }
    }
    for r in 0..real.size {
        for c in 0..real.size {
            if !work[r][c].is_zero() {
                parts.push((work[r][c].clone(), format!("E[{},{}]", r + 1, c + 1)));
            }
        }
    }
    if !scalar.is_zero() {
        parts.push((scalar, "1".into()));
    }
    if parts.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (co, name)) in parts.iter().enumerate() {
        let neg = co < &BigRational::zero();
        let mag = if neg { -co } else { co.clone() };
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if name == "1" {
            out.push_str(&mag.to_string());
        } else if mag.is_one() {
            out.push_str(name);
        } else {
            out.push_str(&format!("{mag}*{name}"));
        }
    }
    out
}

// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use crate::involution::{theta_tilde_y, validate_satake};
    use crate::rootdata::{cartan_init, CartanSpec};
    use crate::uq::AlgebraContext;
    use std::collections::BTreeSet;

    fn setup(lbl: &str, pi: &[usize], d: DiagramMap) -> (ThetaData, MatrixRealization) {
        let datum = cartan_init(&CartanSpec::Series(lbl.into())).unwrap();
        let pts: BTreeSet<usize> = pi.iter().copied().collect();
        let td = validate_satake(&datum, &pts, &d).unwrap();
        let real = MatrixRealization::new(&datum).unwrap();
        (td, real)
    }

    #[test]
    fn chevalley_relations_hold_in_the_realizations() {
        for lbl in ["A1", "A2", "A3", "A1xA1"] {
            let datum = cartan_init(&CartanSpec::Series(lbl.into())).unwrap();
            let real = MatrixRealization::new(&datum).unwrap();
            for i in 0..datum.n {
                for j in 0..datum.n {
                    let hf = rmat_bracket(&real.h(i), &real.f(j));
                    assert!(mats_equal(
                        &hf,
                        &rmat_scale(&real.f(j), &rat(-datum.cartan[i][j]))
                    ));
                    let ef = rmat_bracket(&real.e(i), &real.f(j));
                    if i == j {
                        assert!(mats_equal(&ef, &real.h(i)));
                    } else {
                        assert!(rmat_is_zero(&ef));
                    }
                }
            }
        }
    }

    #[test]
    fn split_involution_swaps_e_and_f() {
        let (td, real) = setup("A2", &[], DiagramMap::Id);
        let th = catalog_involution(&td).unwrap();
        assert_eq!(th, ClassicalTheta::SplitSwap);
        for i in 0..2 {
            assert!(mats_equal(&th.apply(&real, &real.e(i)), &real.f(i)));
            assert!(mats_equal(&th.apply(&real, &real.f(i)), &real.e(i)));
            assert!(mats_equal(
                &th.apply(&real, &real.h(i)),
                &rmat_scale(&real.h(i), &rat(-1))
            ));
        }
    }

    #[test]
    fn catalog_involutions_are_involutive_automorphisms() {
        let cases = vec![
            setup("A1", &[], DiagramMap::Id),
            setup("A2", &[], DiagramMap::Id),
            setup("A2", &[], DiagramMap::Flip),
            setup("A1xA1", &[], DiagramMap::Flip),
        ];
        for (td, real) in cases {
            let th = catalog_involution(&td).unwrap();
            let mut gens = Vec::new();
            for i in 0..td.datum.n {
                gens.push(real.e(i));
                gens.push(real.f(i));
                gens.push(real.h(i));
            }
            for a in &gens {
                assert!(mats_equal(&th.apply(&real, &th.apply(&real, a)), a));
                for b in &gens {
                    let lhs = th.apply(&real, &rmat_bracket(a, b));
                    let rhs = rmat_bracket(&th.apply(&real, a), &th.apply(&real, b));
                    assert!(mats_equal(&lhs, &rhs));
                }
            }
            // theta matches the bracket images and Theta on the Cartan
            for i in 0..td.datum.n {
                assert!(mats_equal(&th.apply(&real, &real.f(i)), &theta_f(&td, &real, i)));
                assert!(mats_equal(&th.apply(&real, &real.e(i)), &theta_e(&td, &real, i)));
                let coords = td.datum.simple_root(i);
                assert!(mats_equal(
                    &th.apply(&real, &real.h(i)),
                    &theta_h(&td, &real, &coords)
                ));
            }
        }
    }

    #[test]
    fn flip_involution_reverses_the_diagram() {
        let (td, real) = setup("A2", &[], DiagramMap::Flip);
        let th = catalog_involution(&td).unwrap();
        assert_eq!(th, ClassicalTheta::Reversal);
        assert!(mats_equal(&th.apply(&real, &real.e(0)), &real.f(1)));
        assert!(mats_equal(&th.apply(&real, &real.f(0)), &real.e(1)));
    }

    #[test]
    fn parabolic_a2_has_no_involution_but_bracket_images_exist() {
        let (td, real) = setup("A2", &[0], DiagramMap::Id);
        assert!(catalog_involution(&td).is_none());
        // theta(f_2) = [e1, e2] = E13, theta(e_2) = -[f1, f2] = E31
        let mut e13 = real.zero();
        e13[0][2] = BigRational::one();
        assert!(mats_equal(&theta_f(&td, &real, 1), &e13));
        let mut e31 = real.zero();
        e31[2][0] = BigRational::one();
        assert!(mats_equal(&theta_e(&td, &real, 1), &e31));
        // theta^2 cannot be the identity: theta(E13) = theta([e1,e2]) =
        // [e1, theta(e2)] = -f2, flipping the sign on f_2 — the parity
        // obstruction in matrix form
        let again = rmat_bracket(&real.e(0), &theta_e(&td, &real, 1));
        assert!(mats_equal(&again, &rmat_scale(&real.f(1), &rat(-1))));
    }

    #[test]
    fn quantum_lifts_specialize_to_the_bracket_images() {
        let cases = vec![
            setup("A1", &[], DiagramMap::Id),
            setup("A2", &[], DiagramMap::Id),
            setup("A2", &[], DiagramMap::Flip),
            setup("A1xA1", &[], DiagramMap::Flip),
            setup("A2", &[0], DiagramMap::Id),
            setup("A3", &[0, 2], DiagramMap::Id),
        ];
        for (td, real) in cases {
            let ctx = AlgebraContext::with_defaults(td.datum.clone()).unwrap();
            for i in 0..td.datum.n {
                if td.pi_theta.contains(&i) {
                    continue;
                }
                let img = specialize_element(&real, &theta_tilde_y(&td, &ctx, i).unwrap()).unwrap();
                assert!(
                    mats_equal(&img, &predicted_specialization(&td, &real, i)),
                    "{} generator {}",
                    td.datum.label,
                    i + 1
                );
            }
        }
    }

    #[test]
    fn middle_pair_a3_brackets_commute_across_orders() {
        // pi_theta = {1,3}: the chain letters commute, so both bracket
        // orders give the same vector and m(2) = 2 keeps the signs trivial
        let (td, real) = setup("A3", &[0, 2], DiagramMap::Id);
        assert_eq!(td.m_of[&1], 2);
        assert!(td.parity_ok());
        let tf = theta_f(&td, &real, 1);
        let e2 = real.e(1);
        let other = rmat_bracket(&real.e(0), &rmat_bracket(&real.e(2), &e2));
        assert!(mats_equal(&tf, &other));
    }
}

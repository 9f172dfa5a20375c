//! Maximally split involution data and its quantum lift on the y-generators.
//!
//! `validate_satake` packages a lattice involution Theta = -w0 d together
//! with the permutation p on the non-fixed simple roots, a deterministic
//! half-set pi* (lowest index per p-orbit), and, for each i in pi*, the
//! admissible raising sequence through extreme weights of the ad-module
//! generated over the fixed subsystem.  The quantum lift evaluates
//!
//!   theta~(y_i)      = (ad_r x_{i_1}^{(m_1)} ... x_{i_r}^{(m_r)}) t_{p(i)}^{-1} x_{p(i)}
//!   theta~(y_{p(i)}) = (-1)^{m(i)} (ad_r x_{i_r}^{(m_r)} ... x_{i_1}^{(m_1)}) t_i^{-1} x_i
//!
//! with divided powers, where the leftmost factor of an ad_r chain acts
//! first.  The sequences are found classically: starting from alpha_{p(i)},
//! repeatedly reflect to the top of the least available root string inside
//! the fixed subsystem until the target weight Theta(-alpha_i) is reached.
//! Each step is a full string, so every intermediate vector is extreme and
//! the result does not depend on the greedy tie-breaking.

use crate::error::Error;
use crate::qfield::{qfactorial, QRat};
use crate::rootdata::{
    theta_lattice, theta_permutation, DiagramMap, Lattice, LatticeMap, RootDatum,
};
use crate::uq::hopf::{adjoint_right, Generator};
use crate::uq::{AlgebraContext, Element, NormalWord};
use std::collections::{BTreeMap, BTreeSet};

/// A raising sequence in the order written in the lift formulas: the first
/// listed index acts first under the right adjoint action.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdmissibleSequence {
    pub indices: Vec<usize>,
    pub powers: Vec<u32>,
}

impl AdmissibleSequence {
    pub fn total(&self) -> u32 {
        self.powers.iter().sum()
    }
}

/// Validated involution data for a pair (pi_theta, d) on a root datum.
#[derive(Debug, Clone)]
pub struct ThetaData {
    pub datum: RootDatum,
    pub pi_theta: BTreeSet<usize>,
    pub d: DiagramMap,
    pub theta: LatticeMap,
    /// involutive permutation with p[i] = i on pi_theta
    pub p: Vec<usize>,
    /// lowest index of each p-orbit outside pi_theta
    pub pi_star: BTreeSet<usize>,
    /// raising sequence per pi* index
    pub sequences: BTreeMap<usize, AdmissibleSequence>,
    /// m(i) per index outside pi_theta (shared along a p-orbit)
    pub m_of: BTreeMap<usize, u32>,
    /// indices with p(i) = i whose m(i) is odd; nonempty means the datum has
    /// no classical involution behind it (the parity property fails)
    pub parity_violations: Vec<usize>,
}

impl ThetaData {
    pub fn parity_ok(&self) -> bool {
        self.parity_violations.is_empty()
    }
}

fn coroot_pairing(datum: &RootDatum, mu: &[i64], j: usize) -> i64 {
    let aj = datum.simple_root(j);
    let num = 2 * datum.pairing(mu, &aj);
    let den = datum.pairing(&aj, &aj);
    debug_assert_eq!(num % den, 0);
    num / den
}

/// Greedy extreme-weight walk from `base` to `target` by full root strings
/// inside pi_theta.  Returns steps in application order (first step first).
fn raising_walk(
    datum: &RootDatum,
    pi_theta: &BTreeSet<usize>,
    base: &[i64],
    target: &[i64],
) -> Result<Vec<(usize, u32)>, Error> {
    let diff: Lattice = target.iter().zip(base).map(|(t, b)| t - b).collect();
    for (k, &c) in diff.iter().enumerate() {
        if c < 0 || (c > 0 && !pi_theta.contains(&k)) {
            return Err(Error::Validation(format!(
                "target weight {target:?} is not above {base:?} in the fixed subsystem"
            )));
        }
    }
    let mut mu: Lattice = base.to_vec();
    let mut steps = Vec::new();
    let bound = RootDatum::ht(&diff) + 1;
    for _ in 0..=bound {
        if mu == target {
            return Ok(steps);
        }
        let mut advanced = false;
        for &j in pi_theta {
            let m = -coroot_pairing(datum, &mu, j);
            if m <= 0 {
                continue;
            }
            let mut nu = mu.clone();
            nu[j] += m;
            let ok = target.iter().zip(&nu).all(|(t, v)| t - v >= 0);
            if ok {
                steps.push((j, m as u32));
                mu = nu;
                advanced = true;
                break;
            }
        }
        if !advanced {
            return Err(Error::Validation(format!(
                "no admissible raising step from {mu:?} toward {target:?}"
            )));
        }
    }
    Err(Error::Validation(format!(
        "raising walk from {base:?} failed to terminate at {target:?}"
    )))
}

/// Validate (pi_theta, d) and assemble the full involution datum.
pub fn validate_satake(
    datum: &RootDatum,
    pi_theta: &BTreeSet<usize>,
    d: &DiagramMap,
) -> Result<ThetaData, Error> {
    let theta = theta_lattice(datum, pi_theta, d)?;
    let p = theta_permutation(datum, &theta)?;
    let mut pi_star = BTreeSet::new();
    for i in 0..datum.n {
        if !pi_theta.contains(&i) && i <= p[i] {
            pi_star.insert(i);
        }
    }
    let mut sequences = BTreeMap::new();
    let mut m_of = BTreeMap::new();
    let mut parity_violations = Vec::new();
    for &i in &pi_star {
        let minus_ai: Lattice = datum.simple_root(i).iter().map(|&c| -c).collect();
        let target = theta.apply(&minus_ai);
        let base = datum.simple_root(p[i]);
        let walk = raising_walk(datum, pi_theta, &base, &target)?;
        // the walk raises from alpha_{p(i)}, i.e. it lists (i_r .. i_1);
        // store the sequence in formula order (i_1 .. i_r)
        let mut indices: Vec<usize> = walk.iter().map(|&(j, _)| j).collect();
        let mut powers: Vec<u32> = walk.iter().map(|&(_, m)| m).collect();
        indices.reverse();
        powers.reverse();
        let seq = AdmissibleSequence { indices, powers };
        let total = seq.total();
        if p[i] == i && total % 2 == 1 {
            parity_violations.push(i);
        }
        m_of.insert(i, total);
        m_of.insert(p[i], total);
        sequences.insert(i, seq);
    }
    Ok(ThetaData {
        datum: datum.clone(),
        pi_theta: pi_theta.clone(),
        d: d.clone(),
        theta,
        p,
        pi_star,
        sequences,
        m_of,
        parity_violations,
    })
}

/// The raising sequence attached to an index of pi*.
pub fn admissible_sequence<'a>(
    td: &'a ThetaData,
    i: usize,
) -> Result<&'a AdmissibleSequence, Error> {
    td.sequences.get(&i).ok_or_else(|| {
        Error::Argument(format!(
            "index {} is not in pi* = {:?} (1-based shown as stored, 0-based)",
            i, td.pi_star
        ))
    })
}

fn tinv_x(ctx: &AlgebraContext, i: usize) -> Element {
    let n = ctx.n();
    let mut w = NormalWord::unit(n);
    for (k, c) in w.t.iter_mut().zip(ctx.datum.simple_root(i)) {
        *k -= c;
    }
    w.x.push(i as u8);
    Element::from_word(w, QRat::one())
}

fn apply_divided_chain(
    ctx: &AlgebraContext,
    chain: &[(usize, u32)],
    start: Element,
) -> Result<Element, Error> {
    let mut acc = start;
    for &(j, m) in chain {
        for _ in 0..m {
            acc = adjoint_right(ctx, &Generator::X(j), &acc)?;
        }
        acc = acc.scale(&qfactorial(m, ctx.datum.d_s(j)).inv());
    }
    Ok(acc)
}

/// Quantum lift theta~(y_i) for i outside pi_theta.
pub fn theta_tilde_y(td: &ThetaData, ctx: &AlgebraContext, i: usize) -> Result<Element, Error> {
    let n = td.datum.n;
    if i >= n {
        return Err(Error::Argument(format!(
            "generator index {} out of range 1..={n}",
            i + 1
        )));
    }
    if td.pi_theta.contains(&i) {
        return Err(Error::Argument(format!(
            "theta~(y{}) = y{} on the fixed subsystem; the lift formula only applies outside pi_theta",
            i + 1,
            i + 1
        )));
    }
    let (chain, start, sign_flip): (Vec<(usize, u32)>, Element, bool) =
        if let Some(seq) = td.sequences.get(&i) {
            let chain = seq
                .indices
                .iter()
                .copied()
                .zip(seq.powers.iter().copied())
                .collect();
            (chain, tinv_x(ctx, td.p[i]), false)
        } else {
            let star = td.p[i];
            let seq = td.sequences.get(&star).ok_or_else(|| {
                Error::Internal(format!("no sequence stored for orbit of index {star}"))
            })?;
            let chain = seq
                .indices
                .iter()
                .copied()
                .zip(seq.powers.iter().copied())
                .rev()
                .collect();
            (chain, tinv_x(ctx, star), seq.total() % 2 == 1)
        };
    let mut out = apply_divided_chain(ctx, &chain, start)?;
    if sign_flip {
        out = out.neg();
    }
    if out.is_zero() {
        return Err(Error::Internal(format!(
            "theta~(y{}) evaluated to zero",
            i + 1
        )));
    }
    let expected = td.theta.apply(
        &td.datum
            .simple_root(i)
            .iter()
            .map(|&c| -c)
            .collect::<Vec<_>>(),
    );
    let got = ctx.weight(&out)?;
    if got != expected {
        return Err(Error::Internal(format!(
            "theta~(y{}) has weight {got:?}, expected Theta(-alpha) = {expected:?}",
            i + 1
        )));
    }
    Ok(out)
}

/// Torus action of the lift: tau(lambda) goes to tau(Theta(-lambda)).
pub fn theta_tilde_torus(td: &ThetaData, lambda: &[i64]) -> Lattice {
    let minus: Lattice = lambda.iter().map(|&c| -c).collect();
    td.theta.apply(&minus)
}

/// Z-basis of the Theta-fixed sublattice of the root lattice (the kernel of
/// Theta - id over Z).
pub fn fixed_lattice_basis(td: &ThetaData) -> Vec<Lattice> {
    let n = td.datum.n;
    let mut m = vec![vec![0i64; n]; n];
    for j in 0..n {
        let e: Lattice = (0..n).map(|x| i64::from(x == j)).collect();
        let im = td.theta.apply(&e);
        for (k, row) in m.iter_mut().enumerate() {
            row[j] = im[k] - e[k];
        }
    }
    crate::linalg::integer_kernel(&m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::integer_kernel;
    use crate::rootdata::{cartan_init, CartanSpec};

    fn datum(lbl: &str) -> RootDatum {
        cartan_init(&CartanSpec::Series(lbl.into())).unwrap()
    }

    fn ctx(d: &RootDatum) -> AlgebraContext {
        AlgebraContext::with_defaults(d.clone()).unwrap()
    }

    fn td(lbl: &str, pi: &[usize], d: DiagramMap) -> ThetaData {
        let dm = datum(lbl);
        let pts: BTreeSet<usize> = pi.iter().copied().collect();
        validate_satake(&dm, &pts, &d).unwrap()
    }

    #[test]
    fn split_a1_data_and_lift() {
        let t = td("A1", &[], DiagramMap::Id);
        assert_eq!(t.p, vec![0]);
        assert_eq!(t.pi_star.iter().copied().collect::<Vec<_>>(), vec![0]);
        assert!(t.sequences[&0].indices.is_empty());
        assert_eq!(t.m_of[&0], 0);
        assert!(t.parity_ok());
        let c = ctx(&t.datum);
        let img = theta_tilde_y(&t, &c, 0).unwrap();
        let mut w = NormalWord::unit(1);
        w.t[0] = -1;
        w.x.push(0);
        assert_eq!(img, Element::from_word(w, QRat::one()));
        assert_eq!(theta_tilde_torus(&t, &[1]), vec![1]);
    }

    #[test]
    fn flip_a2_lifts_swap_indices() {
        let t = td("A2", &[], DiagramMap::Flip);
        assert_eq!(t.p, vec![1, 0]);
        assert_eq!(t.pi_star.iter().copied().collect::<Vec<_>>(), vec![0]);
        let c = ctx(&t.datum);
        let img1 = theta_tilde_y(&t, &c, 0).unwrap();
        let mut w = NormalWord::unit(2);
        w.t[1] = -1;
        w.x.push(1);
        assert_eq!(img1, Element::from_word(w, QRat::one()));
        let img2 = theta_tilde_y(&t, &c, 1).unwrap();
        let mut w2 = NormalWord::unit(2);
        w2.t[0] = -1;
        w2.x.push(0);
        // m(1) = 0, so no sign on the partner formula
        assert_eq!(img2, Element::from_word(w2, QRat::one()));
    }

    #[test]
    fn parabolic_a2_sequence_and_lift() {
        let t = td("A2", &[0], DiagramMap::Id);
        assert_eq!(t.p, vec![0, 1]);
        assert_eq!(t.pi_star.iter().copied().collect::<Vec<_>>(), vec![1]);
        let seq = admissible_sequence(&t, 1).unwrap();
        assert_eq!(seq.indices, vec![0]);
        assert_eq!(seq.powers, vec![1]);
        assert_eq!(t.m_of[&1], 1);
        // p(2)=2 with odd m(2): the classical parity property fails here
        assert_eq!(t.parity_violations, vec![1]);
        let c = ctx(&t.datum);
        let img = theta_tilde_y(&t, &c, 1).unwrap();
        // t1^-1 t2^-1 (x2 x1 - q^{(a1,a2)} x1 x2), cf. the right-adjoint formula
        let tt = c.torus(&[-1, -1]).unwrap();
        let x2x1 = c.mul(&c.gen_x(1).unwrap(), &c.gen_x(0).unwrap()).unwrap();
        let x1x2 = c.mul(&c.gen_x(0).unwrap(), &c.gen_x(1).unwrap()).unwrap();
        let expected = c
            .mul(&tt, &x2x1.sub(&x1x2.scale(&QRat::q_pow(-1))))
            .unwrap();
        assert_eq!(img, expected);
        assert_eq!(c.weight(&img).unwrap(), vec![1, 1]);
    }

    #[test]
    fn b2_short_fixed_uses_a_divided_power() {
        // pi_theta = {alpha_2} (short): Theta(-alpha_1) = alpha_1 + 2 alpha_2,
        // sequence ((2),(2)), m = 2 (even, consistent with a classical form)
        let t = td("B2", &[1], DiagramMap::Id);
        assert_eq!(t.p, vec![0, 1]);
        let seq = admissible_sequence(&t, 0).unwrap();
        assert_eq!(seq.indices, vec![1]);
        assert_eq!(seq.powers, vec![2]);
        assert!(t.parity_ok());
        let c = ctx(&t.datum);
        let img = theta_tilde_y(&t, &c, 0).unwrap();
        assert_eq!(c.weight(&img).unwrap(), vec![1, 2]);
        // the lift lands in the expected coset: every term is tau(-a1-2a2) x-word
        for w in img.terms.keys() {
            assert!(w.y.is_empty());
            assert_eq!(w.t, vec![-1, -2]);
            assert_eq!(w.x.len(), 3);
        }
    }

    #[test]
    fn lift_rejects_fixed_indices() {
        let t = td("A2", &[0], DiagramMap::Id);
        let c = ctx(&t.datum);
        assert!(matches!(
            theta_tilde_y(&t, &c, 0),
            Err(Error::Argument(_))
        ));
    }

    #[test]
    fn torus_conjugation_scales_by_theta_weight() {
        // (7.16)-style: for lambda fixed by Theta, conjugation scales
        // theta~(y_i) by q^{(lambda, Theta(-alpha_i))}
        let t = td("A2", &[0], DiagramMap::Id);
        let c = ctx(&t.datum);
        let img = theta_tilde_y(&t, &c, 1).unwrap();
        let fixed = integer_kernel(
            &(0..2)
                .map(|k| {
                    let mut row = vec![0i64; 2];
                    for (j, r) in row.iter_mut().enumerate() {
                        let e: Lattice = (0..2).map(|x| i64::from(x == j)).collect();
                        *r = t.theta.apply(&e)[k] - e[k];
                    }
                    row
                })
                .collect::<Vec<_>>(),
        );
        assert!(!fixed.is_empty());
        for lam in &fixed {
            let tl = c.torus(lam).unwrap();
            let minus: Lattice = lam.iter().map(|&v| -v).collect();
            let tli = c.torus(&minus).unwrap();
            let conj = c.mul_many(&[&tl, &img, &tli]).unwrap();
            let e = c.datum.pairing(lam, &c.weight(&img).unwrap());
            assert_eq!(conj, img.scale(&QRat::q_pow(e)));
        }
    }
}

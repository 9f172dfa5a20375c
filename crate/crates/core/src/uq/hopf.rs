//! Hopf structure on U_q(g): coproduct, counit, antipode, the compact-form
//! antiautomorphism kappa, and the left/right adjoint actions.
//!
//! The coproduct is extended multiplicatively from the generator values;
//! tensor factors are kept in normal form independently (there are no cross
//! relations between the factors).  kappa and the antipode are
//! antimultiplicative, so words are folded in reverse letter order.

use crate::error::Error;
use crate::qfield::QRat;
use crate::rootdata::Lattice;
use crate::uq::{AlgebraContext, Budget, Element, NormalWord};
use std::collections::BTreeMap;

/// A generator atom for the adjoint actions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Generator {
    X(usize),
    Y(usize),
    /// tau(lambda)
    T(Lattice),
}

/// A finite combination of pure tensors of normal words.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TensorElement {
    pub terms: BTreeMap<(NormalWord, NormalWord), QRat>,
}

impl TensorElement {
    pub fn zero() -> Self {
        TensorElement::default()
    }

    pub fn unit(n: usize) -> Self {
        let mut t = TensorElement::default();
        t.add_term(NormalWord::unit(n), NormalWord::unit(n), QRat::one());
        t
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, l: NormalWord, r: NormalWord, c: QRat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry((l, r)) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let v = e.get() + &c;
                if v.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        }
    }

    pub fn add(&self, other: &TensorElement) -> TensorElement {
        let mut out = self.clone();
        for ((l, r), c) in &other.terms {
            out.add_term(l.clone(), r.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &TensorElement) -> TensorElement {
        let mut out = self.clone();
        for ((l, r), c) in &other.terms {
            out.add_term(l.clone(), r.clone(), -c);
        }
        out
    }

    pub fn scale(&self, k: &QRat) -> TensorElement {
        let mut out = TensorElement::default();
        for ((l, r), c) in &self.terms {
            out.add_term(l.clone(), r.clone(), c * k);
        }
        out
    }

    /// Componentwise product (a tensor b)(c tensor d) = ac tensor bd.
    pub fn mul(
        &self,
        ctx: &AlgebraContext,
        other: &TensorElement,
        budget: &mut Budget,
    ) -> Result<TensorElement, Error> {
        let mut out = TensorElement::default();
        for ((l1, r1), c1) in &self.terms {
            for ((l2, r2), c2) in &other.terms {
                budget.tick()?;
                let le = ctx.mul_budgeted(
                    &Element::from_word(l1.clone(), QRat::one()),
                    &Element::from_word(l2.clone(), QRat::one()),
                    budget,
                )?;
                let re = ctx.mul_budgeted(
                    &Element::from_word(r1.clone(), QRat::one()),
                    &Element::from_word(r2.clone(), QRat::one()),
                    budget,
                )?;
                let c = c1 * c2;
                for (lw, lc) in &le.terms {
                    for (rw, rc) in &re.terms {
                        out.add_term(lw.clone(), rw.clone(), &(&c * lc) * rc);
                    }
                }
            }
        }
        Ok(out)
    }
}

/// a tensor b for two elements.
pub fn tensor_of(a: &Element, b: &Element) -> TensorElement {
    let mut out = TensorElement::default();
    for (wa, ca) in &a.terms {
        for (wb, cb) in &b.terms {
            out.add_term(wa.clone(), wb.clone(), ca * cb);
        }
    }
    out
}

fn coproduct_x(ctx: &AlgebraContext, i: usize) -> TensorElement {
    // Delta(x_i) = x_i (x) 1 + t_i (x) x_i
    let n = ctx.n();
    let mut xi = NormalWord::unit(n);
    xi.x.push(i as u8);
    let mut ti = NormalWord::unit(n);
    ti.t[i] = 1;
    let mut t = TensorElement::default();
    t.add_term(xi.clone(), NormalWord::unit(n), QRat::one());
    t.add_term(ti, xi, QRat::one());
    t
}

fn coproduct_y(ctx: &AlgebraContext, i: usize) -> TensorElement {
    // Delta(y_i) = y_i (x) t_i^{-1} + 1 (x) y_i
    let n = ctx.n();
    let mut yi = NormalWord::unit(n);
    yi.y.push(i as u8);
    let mut tinv = NormalWord::unit(n);
    tinv.t[i] = -1;
    let mut t = TensorElement::default();
    t.add_term(yi.clone(), tinv, QRat::one());
    t.add_term(NormalWord::unit(n), yi, QRat::one());
    t
}

/// Algebra-map extension of the generator coproducts.
pub fn coproduct(ctx: &AlgebraContext, a: &Element) -> Result<TensorElement, Error> {
    let n = ctx.n();
    let mut budget = Budget::new(ctx.budget);
    let mut out = TensorElement::default();
    for (w, c) in &a.terms {
        let mut acc = TensorElement::unit(n);
        for &b in &w.y {
            acc = acc.mul(ctx, &coproduct_y(ctx, b as usize), &mut budget)?;
        }
        if w.t.iter().any(|&k| k != 0) {
            let tw = NormalWord::torus(w.t.clone());
            let mut tt = TensorElement::default();
            tt.add_term(tw.clone(), tw, QRat::one());
            acc = acc.mul(ctx, &tt, &mut budget)?;
        }
        for &x in &w.x {
            acc = acc.mul(ctx, &coproduct_x(ctx, x as usize), &mut budget)?;
        }
        out = out.add(&acc.scale(c));
    }
    Ok(out)
}

/// Counit: 1 on torus characters, 0 on words containing x or y letters.
pub fn counit(a: &Element) -> QRat {
    let mut acc = QRat::zero();
    for (w, c) in &a.terms {
        if w.is_torus() {
            acc = &acc + c;
        }
    }
    acc
}

/// Antipode: antimultiplicative, sigma(x_i) = -t_i^{-1} x_i,
/// sigma(y_i) = -y_i t_i, sigma(tau(lambda)) = tau(-lambda).
pub fn antipode(ctx: &AlgebraContext, a: &Element) -> Result<Element, Error> {
    let n = ctx.n();
    let mut budget = Budget::new(ctx.budget);
    let mut out = Element::default();
    for (w, c) in &a.terms {
        let mut acc = Element::one(n);
        for &x in w.x.iter().rev() {
            let mut piece = NormalWord::unit(n);
            piece.t[x as usize] = -1;
            piece.x.push(x);
            acc = ctx.mul_budgeted(
                &acc,
                &Element::from_word(piece, -&QRat::one()),
                &mut budget,
            )?;
        }
        let minus: Lattice = w.t.iter().map(|&k| -k).collect();
        acc = ctx.mul_budgeted(
            &acc,
            &Element::from_word(NormalWord::torus(minus), QRat::one()),
            &mut budget,
        )?;
        for &y in w.y.iter().rev() {
            let mut piece = NormalWord::unit(n);
            piece.y.push(y);
            piece.t[y as usize] = 1;
            acc = ctx.mul_budgeted(
                &acc,
                &Element::from_word(piece, -&QRat::one()),
                &mut budget,
            )?;
        }
        out = out.add(&acc.scale(c));
    }
    Ok(out)
}

/// kappa: antimultiplicative with kappa(x_i) = y_i t_i,
/// kappa(y_i) = t_i^{-1} x_i, kappa fixed on the torus and on coefficients.
pub fn kappa(ctx: &AlgebraContext, a: &Element) -> Result<Element, Error> {
    let n = ctx.n();
    let mut budget = Budget::new(ctx.budget);
    let mut out = Element::default();
    for (w, c) in &a.terms {
        let mut acc = Element::one(n);
        for &x in w.x.iter().rev() {
            let mut piece = NormalWord::unit(n);
            piece.y.push(x);
            piece.t[x as usize] = 1;
            acc = ctx.mul_budgeted(&acc, &Element::from_word(piece, QRat::one()), &mut budget)?;
        }
        acc = ctx.mul_budgeted(
            &acc,
            &Element::from_word(NormalWord::torus(w.t.clone()), QRat::one()),
            &mut budget,
        )?;
        for &y in w.y.iter().rev() {
            let mut piece = NormalWord::unit(n);
            piece.t[y as usize] = -1;
            piece.x.push(y);
            acc = ctx.mul_budgeted(&acc, &Element::from_word(piece, QRat::one()), &mut budget)?;
        }
        out = out.add(&acc.scale(c));
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// adjoint actions
// ---------------------------------------------------------------------------

/// Left adjoint action of a generator:
/// (ad x_i)b = x_i b - t_i b t_i^{-1} x_i,
/// (ad y_i)b = y_i b t_i - b y_i t_i,
/// (ad tau(lambda))b = tau(lambda) b tau(-lambda).
pub fn adjoint_left(ctx: &AlgebraContext, g: &Generator, b: &Element) -> Result<Element, Error> {
    let n = ctx.n();
    match g {
        Generator::X(i) => {
            let xi = ctx.gen_x(*i)?;
            let ti = ctx.t(*i)?;
            let mut tix = NormalWord::unit(n);
            tix.t[*i] = -1;
            tix.x.push(*i as u8);
            let tail = Element::from_word(tix, QRat::one());
            let m1 = ctx.mul(&xi, b)?;
            let m2 = ctx.mul_many(&[&ti, b, &tail])?;
            Ok(m1.sub(&m2))
        }
        Generator::Y(i) => {
            let yi = ctx.gen_y(*i)?;
            let ti = ctx.t(*i)?;
            let mut yt = NormalWord::unit(n);
            yt.y.push(*i as u8);
            yt.t[*i] = 1;
            let yt = Element::from_word(yt, QRat::one());
            let m1 = ctx.mul_many(&[&yi, b, &ti])?;
            let m2 = ctx.mul(b, &yt)?;
            Ok(m1.sub(&m2))
        }
        Generator::T(lambda) => {
            let tl = ctx.torus(lambda)?;
            let minus: Lattice = lambda.iter().map(|&k| -k).collect();
            let tli = ctx.torus(&minus)?;
            ctx.mul_many(&[&tl, b, &tli])
        }
    }
}

/// Right adjoint action of a generator:
/// (ad_r x_i)b = t_i^{-1} b x_i - t_i^{-1} x_i b,
/// (ad_r y_i)b = b y_i - y_i t_i b t_i^{-1},
/// (ad_r tau(lambda))b = tau(-lambda) b tau(lambda).
pub fn adjoint_right(ctx: &AlgebraContext, g: &Generator, b: &Element) -> Result<Element, Error> {
    let n = ctx.n();
    match g {
        Generator::X(i) => {
            let xi = ctx.gen_x(*i)?;
            let tinv = ctx.t_inv(*i)?;
            let mut tix = NormalWord::unit(n);
            tix.t[*i] = -1;
            tix.x.push(*i as u8);
            let head = Element::from_word(tix, QRat::one());
            let m1 = ctx.mul_many(&[&tinv, b, &xi])?;
            let m2 = ctx.mul(&head, b)?;
            Ok(m1.sub(&m2))
        }
        Generator::Y(i) => {
            let yi = ctx.gen_y(*i)?;
            let tinv = ctx.t_inv(*i)?;
            let mut yt = NormalWord::unit(n);
            yt.y.push(*i as u8);
            yt.t[*i] = 1;
            let yt = Element::from_word(yt, QRat::one());
            let m1 = ctx.mul(b, &yi)?;
            let m2 = ctx.mul_many(&[&yt, b, &tinv])?;
            Ok(m1.sub(&m2))
        }
        Generator::T(lambda) => {
            let tl = ctx.torus(lambda)?;
            let minus: Lattice = lambda.iter().map(|&k| -k).collect();
            let tli = ctx.torus(&minus)?;
            ctx.mul_many(&[&tli, b, &tl])
        }
    }
}

/// (ad g_1 ... g_r) b with the rightmost generator acting first.
pub fn adjoint_left_word(
    ctx: &AlgebraContext,
    gens: &[Generator],
    b: &Element,
) -> Result<Element, Error> {
    let mut acc = b.clone();
    for g in gens.iter().rev() {
        acc = adjoint_left(ctx, g, &acc)?;
    }
    Ok(acc)
}

/// (ad_r g_1 ... g_r) b with the leftmost generator acting first.
pub fn adjoint_right_word(
    ctx: &AlgebraContext,
    gens: &[Generator],
    b: &Element,
) -> Result<Element, Error> {
    let mut acc = b.clone();
    for g in gens.iter() {
        acc = adjoint_right(ctx, g, &acc)?;
    }
    Ok(acc)
}

/// (ad a)b = sum a_(1) b sigma(a_(2)) for an arbitrary element a.
pub fn adjoint_left_elem(
    ctx: &AlgebraContext,
    a: &Element,
    b: &Element,
) -> Result<Element, Error> {
    let delta = coproduct(ctx, a)?;
    let mut out = Element::default();
    for ((l, r), c) in &delta.terms {
        let sig = antipode(ctx, &Element::from_word(r.clone(), QRat::one()))?;
        let le = Element::from_word(l.clone(), QRat::one());
        let prod = ctx.mul_many(&[&le, b, &sig])?;
        out = out.add(&prod.scale(c));
    }
    Ok(out)
}

/// (ad_r a)b = sum sigma(a_(1)) b a_(2).
pub fn adjoint_right_elem(
    ctx: &AlgebraContext,
    a: &Element,
    b: &Element,
) -> Result<Element, Error> {
    let delta = coproduct(ctx, a)?;
    let mut out = Element::default();
    for ((l, r), c) in &delta.terms {
        let sig = antipode(ctx, &Element::from_word(l.clone(), QRat::one()))?;
        let re = Element::from_word(r.clone(), QRat::one());
        let prod = ctx.mul_many(&[&sig, b, &re])?;
        out = out.add(&prod.scale(c));
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// axiom checks (used by tests and the acceptance suite)
// ---------------------------------------------------------------------------

type Triple = BTreeMap<(NormalWord, NormalWord, NormalWord), QRat>;

fn triple_insert(t: &mut Triple, key: (NormalWord, NormalWord, NormalWord), c: QRat) {
    if c.is_zero() {
        return;
    }
    match t.entry(key) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            let v = e.get() + &c;
            if v.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = v;
            }
        }
    }
}

/// (Delta tensor id)Delta(a) = (id tensor Delta)Delta(a).
pub fn coassociativity_holds(ctx: &AlgebraContext, a: &Element) -> Result<bool, Error> {
    let delta = coproduct(ctx, a)?;
    let mut lhs: Triple = BTreeMap::new();
    let mut rhs: Triple = BTreeMap::new();
    for ((l, r), c) in &delta.terms {
        let dl = coproduct(ctx, &Element::from_word(l.clone(), QRat::one()))?;
        for ((a1, a2), k) in &dl.terms {
            triple_insert(&mut lhs, (a1.clone(), a2.clone(), r.clone()), c * k);
        }
        let dr = coproduct(ctx, &Element::from_word(r.clone(), QRat::one()))?;
        for ((a2, a3), k) in &dr.terms {
            triple_insert(&mut rhs, (l.clone(), a2.clone(), a3.clone()), c * k);
        }
    }
    Ok(lhs == rhs)
}

/// (eps tensor id)Delta = id = (id tensor eps)Delta.
pub fn counit_law_holds(ctx: &AlgebraContext, a: &Element) -> Result<bool, Error> {
    let delta = coproduct(ctx, a)?;
    let mut left = Element::default();
    let mut right = Element::default();
    for ((l, r), c) in &delta.terms {
        let el = counit(&Element::from_word(l.clone(), QRat::one()));
        let er = counit(&Element::from_word(r.clone(), QRat::one()));
        left.add_term(r.clone(), &el * c);
        right.add_term(l.clone(), &er * c);
    }
    Ok(left == *a && right == *a)
}

/// m(sigma tensor id)Delta(a) = eps(a) 1 = m(id tensor sigma)Delta(a).
pub fn antipode_law_holds(ctx: &AlgebraContext, a: &Element) -> Result<bool, Error> {
    let delta = coproduct(ctx, a)?;
    let mut left = Element::default();
    let mut right = Element::default();
    for ((l, r), c) in &delta.terms {
        let le = Element::from_word(l.clone(), QRat::one());
        let re = Element::from_word(r.clone(), QRat::one());
        let sl = antipode(ctx, &le)?;
        let sr = antipode(ctx, &re)?;
        left = left.add(&ctx.mul(&sl, &re)?.scale(c));
        right = right.add(&ctx.mul(&le, &sr)?.scale(c));
    }
    let target = Element::one(ctx.n()).scale(&counit(a));
    Ok(left == target && right == target)
}

/// Delta(kappa(a)) = (kappa tensor kappa)(Delta(a)).
pub fn kappa_compatibility_holds(ctx: &AlgebraContext, a: &Element) -> Result<bool, Error> {
    let lhs = coproduct(ctx, &kappa(ctx, a)?)?;
    let delta = coproduct(ctx, a)?;
    let mut rhs = TensorElement::default();
    for ((l, r), c) in &delta.terms {
        let kl = kappa(ctx, &Element::from_word(l.clone(), QRat::one()))?;
        let kr = kappa(ctx, &Element::from_word(r.clone(), QRat::one()))?;
        rhs = rhs.add(&tensor_of(&kl, &kr).scale(c));
    }
    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::{cartan_init, CartanSpec};

    fn ctx(lbl: &str) -> AlgebraContext {
        let d = cartan_init(&CartanSpec::Series(lbl.into())).unwrap();
        AlgebraContext::with_defaults(d).unwrap()
    }

    #[test]
    fn coproduct_on_generators() {
        let c = ctx("A1");
        let x = c.gen_x(0).unwrap();
        let d = coproduct(&c, &x).unwrap();
        let mut expected = TensorElement::default();
        let xi = NormalWord {
            y: vec![],
            t: vec![0],
            x: vec![0],
        };
        expected.add_term(xi.clone(), NormalWord::unit(1), QRat::one());
        expected.add_term(NormalWord::torus(vec![1]), xi, QRat::one());
        assert_eq!(d, expected);
    }

    #[test]
    fn antipode_on_generators() {
        let c = ctx("A1");
        let x = c.gen_x(0).unwrap();
        let y = c.gen_y(0).unwrap();
        let t = c.t(0).unwrap();
        let sx = antipode(&c, &x).unwrap();
        // -t^-1 x
        let mut w = NormalWord::unit(1);
        w.t[0] = -1;
        w.x.push(0);
        assert_eq!(sx, Element::from_word(w, -&QRat::one()));
        let sy = antipode(&c, &y).unwrap();
        let mut wy = NormalWord::unit(1);
        wy.y.push(0);
        wy.t[0] = 1;
        assert_eq!(sy, Element::from_word(wy, -&QRat::one()));
        assert_eq!(
            antipode(&c, &t).unwrap(),
            Element::from_word(NormalWord::torus(vec![-1]), QRat::one())
        );
    }

    #[test]
    fn kappa_squares_to_identity_on_generators() {
        let c = ctx("A2");
        for i in 0..2 {
            for e in [c.gen_x(i).unwrap(), c.gen_y(i).unwrap(), c.t(i).unwrap()] {
                let once = kappa(&c, &e).unwrap();
                let twice = kappa(&c, &once).unwrap();
                assert_eq!(twice, e);
            }
        }
    }

    #[test]
    fn hopf_axioms_on_small_words() {
        let c = ctx("A1");
        let x = c.gen_x(0).unwrap();
        let y = c.gen_y(0).unwrap();
        let xy = c.mul(&x, &y).unwrap();
        for e in [&x, &y, &xy] {
            assert!(coassociativity_holds(&c, e).unwrap());
            assert!(counit_law_holds(&c, e).unwrap());
            assert!(antipode_law_holds(&c, e).unwrap());
            assert!(kappa_compatibility_holds(&c, e).unwrap());
        }
    }

    #[test]
    fn adjoint_formulas_match_coproduct_forms() {
        let c = ctx("A2");
        let b = c.mul(&c.gen_y(0).unwrap(), &c.gen_x(1).unwrap()).unwrap();
        for i in 0..2 {
            let fx = adjoint_left(&c, &Generator::X(i), &b).unwrap();
            let gx = adjoint_left_elem(&c, &c.gen_x(i).unwrap(), &b).unwrap();
            assert_eq!(fx, gx);
            let fy = adjoint_right(&c, &Generator::Y(i), &b).unwrap();
            let gy = adjoint_right_elem(&c, &c.gen_y(i).unwrap(), &b).unwrap();
            assert_eq!(fy, gy);
        }
    }

    #[test]
    fn adjoint_torus_scales_by_weight() {
        let c = ctx("A2");
        let xj = c.gen_x(1).unwrap();
        let ady = adjoint_left(&c, &Generator::T(vec![1, 0]), &xj).unwrap();
        // (ad t_1) x_2 = q^{(a1,a2)} x_2 = q^-1 x_2
        assert_eq!(ady, xj.scale(&QRat::q_pow(-1)));
        let adr = adjoint_right(&c, &Generator::T(vec![1, 0]), &xj).unwrap();
        assert_eq!(adr, xj.scale(&QRat::q_pow(1)));
    }

    #[test]
    fn a1_adjoint_worked_example() {
        // (ad x)y = (1 - q^-2) yx + (t - t^-1)/(q - q^-1)
        let c = ctx("A1");
        let y = c.gen_y(0).unwrap();
        let out = adjoint_left(&c, &Generator::X(0), &y).unwrap();
        let yx = c.mul(&y, &c.gen_x(0).unwrap()).unwrap();
        let cc = c.cross_constant(0);
        let mut expected = yx.scale(&(&QRat::one() - &QRat::q_pow(-2)));
        expected.add_term(NormalWord::torus(vec![1]), cc.clone());
        expected.add_term(NormalWord::torus(vec![-1]), -&cc);
        assert_eq!(out, expected);
    }

    #[test]
    fn adr_on_coideal_tail_a2() {
        // (ad_r x_1)(t_2^-1 x_2) = t_1^-1 t_2^-1 (x_2 x_1 - q^{(a1,a2)} x_1 x_2)
        let c = ctx("A2");
        let mut tail = NormalWord::unit(2);
        tail.t[1] = -1;
        tail.x.push(1);
        let b = Element::from_word(tail, QRat::one());
        let out = adjoint_right(&c, &Generator::X(0), &b).unwrap();
        let mk = |xw: &[u8]| NormalWord {
            y: vec![],
            t: vec![-1, -1],
            x: xw.to_vec(),
        };
        // t_1^-1 t_2^-1 x_2 x_1 = q^{(a1+a2, a1)} ... keep exact: compute via ctx
        let tt = ctx_torus(&c, &[-1, -1]);
        let x2x1 = c
            .mul(&c.gen_x(1).unwrap(), &c.gen_x(0).unwrap())
            .unwrap();
        let x1x2 = c
            .mul(&c.gen_x(0).unwrap(), &c.gen_x(1).unwrap())
            .unwrap();
        let expected = c
            .mul(&tt, &x2x1.sub(&x1x2.scale(&QRat::q_pow(-1))))
            .unwrap();
        assert_eq!(out, expected);
        // and the support is the two expected words
        assert!(out.terms.keys().all(|w| *w == mk(&[0, 1]) || *w == mk(&[1, 0])));
    }

    fn ctx_torus(c: &AlgebraContext, v: &[i64]) -> Element {
        c.torus(v).unwrap()
    }

    #[test]
    fn adjoint_of_unit_is_counit() {
        let c = ctx("A1");
        let one = Element::one(1);
        for g in [Generator::X(0), Generator::Y(0), Generator::T(vec![1])] {
            let l = adjoint_left(&c, &g, &one).unwrap();
            let r = adjoint_right(&c, &g, &one).unwrap();
            let eps = match &g {
                Generator::T(_) => Element::one(1),
                _ => Element::zero(),
            };
            assert_eq!(l, eps);
            assert_eq!(r, eps);
        }
    }
}

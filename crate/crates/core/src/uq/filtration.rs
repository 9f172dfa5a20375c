//! Weight-space projections and the bidegree filtration.
//!
//! Every normal word y_w tau(nu) x_v is trihomogeneous: it has a y-weight,
//! a torus character, and an x-weight.  The projections here act termwise on
//! the normal-form basis, so they are exact and involve no arithmetic beyond
//! coefficient copies.

use crate::error::Error;
use crate::rootdata::Lattice;
use crate::uq::{letter_content, Element, NormalWord};
use std::collections::BTreeSet;

fn dims(w: &NormalWord) -> usize {
    w.t.len()
}

/// Keep the terms with y-weight `lambda` and x-weight `mu`.
pub fn project_trihomog(a: &Element, lambda: &[i64], mu: &[i64]) -> Element {
    let mut out = Element::zero();
    for (w, c) in &a.terms {
        let n = dims(w);
        if w.wt_y(n) == lambda && w.wt_x(n) == mu {
            out.add_term(w.clone(), c.clone());
        }
    }
    out
}

/// Keep the terms lying over the coset character `t`, i.e. those whose torus
/// part plus x-weight equals `t`.
pub fn project_coset(a: &Element, t: &[i64]) -> Element {
    let mut out = Element::zero();
    for (w, c) in &a.terms {
        let n = dims(w);
        let mut key = w.t.clone();
        for (k, v) in key.iter_mut().zip(letter_content(&w.x, n)) {
            *k += v;
        }
        if key == t {
            out.add_term(w.clone(), c.clone());
        }
    }
    out
}

/// The coset characters that occur in `a`, in the order of `project_coset`.
pub fn occurring_cosets(a: &Element) -> BTreeSet<Lattice> {
    let mut out = BTreeSet::new();
    for w in a.terms.keys() {
        let n = dims(w);
        let mut key = w.t.clone();
        for (k, v) in key.iter_mut().zip(letter_content(&w.x, n)) {
            *k += v;
        }
        out.insert(key);
    }
    out
}

/// Projection onto the torus subalgebra: the terms with no x or y letters.
pub fn phi(a: &Element) -> Element {
    let mut out = Element::zero();
    for (w, c) in &a.terms {
        if w.is_torus() {
            out.add_term(w.clone(), c.clone());
        }
    }
    out
}

/// The (y-weight, x-weight) pairs occurring in `a`.
pub fn support_pairs(a: &Element) -> BTreeSet<(Lattice, Lattice)> {
    let mut out = BTreeSet::new();
    for w in a.terms.keys() {
        let n = dims(w);
        out.insert((w.wt_y(n), w.wt_x(n)));
    }
    out
}

/// Bidegree of a term: (height of the y-weight, height of the x-weight).
pub fn term_bidegree(w: &NormalWord) -> (usize, usize) {
    (w.y.len(), w.x.len())
}

/// Bidegree of a nonzero element: the lexicographic maximum of the term
/// bidegrees, y-height first.
pub fn bidegree(a: &Element) -> Result<(usize, usize), Error> {
    a.terms
        .keys()
        .map(term_bidegree)
        .max()
        .ok_or_else(|| Error::Argument("bidegree of the zero element".into()))
}

/// The weight pairs realized at the maximal bidegree.
pub fn max_support(a: &Element) -> Result<BTreeSet<(Lattice, Lattice)>, Error> {
    let top = bidegree(a)?;
    let mut out = BTreeSet::new();
    for w in a.terms.keys() {
        if term_bidegree(w) == top {
            let n = dims(w);
            out.insert((w.wt_y(n), w.wt_x(n)));
        }
    }
    Ok(out)
}

/// The sum of the terms of maximal bidegree.
pub fn tip(a: &Element) -> Result<Element, Error> {
    let top = bidegree(a)?;
    let mut out = Element::zero();
    for (w, c) in &a.terms {
        if term_bidegree(w) == top {
            out.add_term(w.clone(), c.clone());
        }
    }
    Ok(out)
}

/// Degree of a term in the flag filtration: height of the y-weight minus the
/// sum of the torus coordinates (each y_i and each regrouped x-generator
/// counts +1, each torus generator -1).
pub fn term_degree_f(w: &NormalWord) -> i64 {
    w.y.len() as i64 - w.t.iter().sum::<i64>()
}

/// Filtration degree of a nonzero element: the maximum over its terms.
pub fn degree_f(a: &Element) -> Result<i64, Error> {
    a.terms
        .keys()
        .map(term_degree_f)
        .max()
        .ok_or_else(|| Error::Argument("filtration degree of the zero element".into()))
}

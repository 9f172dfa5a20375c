//! Word rewriting for the quantum Serre ideal: initial rules from the Serre
//! relations, overlap (critical-pair) completion up to a degree bound, and
//! budgeted reduction to irreducible words.
//!
//! Words live over a single alphabet of generator indices; the same completed
//! system serves both the x-side and the y-side since the Serre relations
//! have identical coefficients in either alphabet.  All rules are homogeneous
//! in weight, hence length-preserving, so reduction never grows a word and
//! confluence verified up to length D covers every word of length <= D.

use crate::error::Error;
use crate::qfield::{qbinom, QRat};
use std::cmp::Ordering;
use std::collections::BTreeMap;

pub type Letter = u8;
pub type Word = Vec<Letter>;

/// Step budget shared across one top-level operation.
#[derive(Debug)]
pub struct Budget {
    left: u64,
}

impl Budget {
    pub fn new(steps: u64) -> Self {
        Budget { left: steps }
    }

    pub fn tick(&mut self) -> Result<(), Error> {
        if self.left == 0 {
            return Err(Error::Resource("rewrite step budget exhausted".into()));
        }
        self.left -= 1;
        Ok(())
    }
}

/// Degree-lexicographic word order: length first, then letter-by-letter.
pub fn deglex(a: &Word, b: &Word) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

#[derive(Debug, Clone)]
pub struct Rule {
    pub lhs: Word,
    pub rhs: Vec<(Word, QRat)>,
}

#[derive(Debug, Clone)]
pub struct RewriteSystem {
    pub rules: Vec<Rule>,
    /// All critical pairs among rules with superposition length <= this bound
    /// reduce to zero (recorded by the completion run).
    pub confluent_to: usize,
}

type Poly = BTreeMap<Word, QRat>;

fn poly_insert(p: &mut Poly, w: Word, c: QRat) {
    if c.is_zero() {
        return;
    }
    match p.entry(w) {
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

impl RewriteSystem {
    fn find_redex(&self, w: &[Letter]) -> Option<(usize, usize)> {
        for pos in 0..w.len() {
            for (ri, rule) in self.rules.iter().enumerate() {
                let l = rule.lhs.len();
                if pos + l <= w.len() && w[pos..pos + l] == rule.lhs[..] {
                    return Some((pos, ri));
                }
            }
        }
        None
    }

    pub fn is_irreducible(&self, w: &[Letter]) -> bool {
        self.find_redex(w).is_none()
    }

    /// Fully reduce a single word to a combination of irreducible words.
    pub fn reduce_word(&self, w: &Word, budget: &mut Budget) -> Result<Vec<(Word, QRat)>, Error> {
        let mut acc: Poly = BTreeMap::new();
        let mut stack: Vec<(Word, QRat)> = vec![(w.clone(), QRat::one())];
        while let Some((u, c)) = stack.pop() {
            match self.find_redex(&u) {
                None => poly_insert(&mut acc, u, c),
                Some((pos, ri)) => {
                    budget.tick()?;
                    let rule = &self.rules[ri];
                    let l = rule.lhs.len();
                    for (r, rc) in &rule.rhs {
                        let mut nw = Vec::with_capacity(u.len() - l + r.len());
                        nw.extend_from_slice(&u[..pos]);
                        nw.extend_from_slice(r);
                        nw.extend_from_slice(&u[pos + l..]);
                        stack.push((nw, &c * rc));
                    }
                }
            }
        }
        Ok(acc.into_iter().collect())
    }

    fn reduce_poly(&self, p: &Poly, budget: &mut Budget) -> Result<Poly, Error> {
        let mut acc: Poly = BTreeMap::new();
        for (w, c) in p {
            for (rw, rc) in self.reduce_word(w, budget)? {
                poly_insert(&mut acc, rw, &rc * c);
            }
        }
        Ok(acc)
    }
}

/// Support of the Serre relation for the ordered pair (i, j):
/// sum_m (-1)^m [1-a_ij, m]_{q_i} X_i^{1-a_ij-m} X_j X_i^m.
pub fn serre_relation(i: usize, j: usize, a_ij: i64, d_i: u32) -> Vec<(Word, QRat)> {
    let bound = (1 - a_ij) as u32;
    let mut out = Vec::new();
    for m in 0..=bound {
        let mut w: Word = Vec::with_capacity(bound as usize + 1);
        for _ in 0..(bound - m) {
            w.push(i as Letter);
        }
        w.push(j as Letter);
        for _ in 0..m {
            w.push(i as Letter);
        }
        let mut c = qbinom(bound, m, d_i).expect("m <= bound");
        if m % 2 == 1 {
            c = -&c;
        }
        out.push((w, c));
    }
    out
}

/// Orient a reduced nonzero polynomial into a rule: the deg-lex largest word
/// becomes the left-hand side.
fn orient(p: &Poly) -> Option<Rule> {
    let (lhs, lead) = p.iter().max_by(|a, b| deglex(a.0, b.0))?;
    let lhs = lhs.clone();
    let inv = lead.inv();
    let rhs = p
        .iter()
        .filter(|(w, _)| **w != lhs)
        .map(|(w, c)| (w.clone(), -&(c * &inv)))
        .collect();
    Some(Rule { lhs, rhs })
}

/// Critical-pair completion of the given homogeneous relations under deg-lex,
/// checking every superposition of length <= degree_bound.
pub fn complete(
    relations: Vec<Vec<(Word, QRat)>>,
    degree_bound: usize,
    budget: &mut Budget,
) -> Result<RewriteSystem, Error> {
    let mut sys = RewriteSystem {
        rules: Vec::new(),
        confluent_to: degree_bound,
    };
    for rel in relations {
        if rel.iter().any(|(w, _)| w.len() > degree_bound) {
            return Err(Error::Resource(format!(
                "relation of degree {} exceeds the bound {}",
                rel.iter().map(|(w, _)| w.len()).max().unwrap_or(0),
                degree_bound
            )));
        }
        let mut p: Poly = BTreeMap::new();
        for (w, c) in rel {
            poly_insert(&mut p, w, c);
        }
        let p = sys.reduce_poly(&p, budget)?;
        if let Some(rule) = orient(&p) {
            if !sys.rules.iter().any(|r| r.lhs == rule.lhs) {
                sys.rules.push(rule);
            }
        }
    }
    // overlap/inclusion completion: repeat until every critical pair with
    // superposition length <= degree_bound reduces to zero
    loop {
        let mut fresh: Option<Rule> = None;
        'scan: for i in 0..sys.rules.len() {
            for j in 0..sys.rules.len() {
                let l1 = sys.rules[i].lhs.clone();
                let l2 = sys.rules[j].lhs.clone();
                // proper overlaps: nonempty suffix of l1 = prefix of l2
                for k in 1..l1.len().min(l2.len()) {
                    if l1[l1.len() - k..] != l2[..k] {
                        continue;
                    }
                    let mut sup = l1.clone();
                    sup.extend_from_slice(&l2[k..]);
                    if sup.len() > degree_bound {
                        continue;
                    }
                    budget.tick()?;
                    if let Some(rule) =
                        resolve_pair(&sys, &sup, 0, i, (sup.len() - l2.len(), j), budget)?
                    {
                        fresh = Some(rule);
                        break 'scan;
                    }
                }
                // inclusions: l2 a proper factor of l1
                if i != j && l2.len() < l1.len() {
                    for pos in 0..=(l1.len() - l2.len()) {
                        if l1[pos..pos + l2.len()] != l2[..] {
                            continue;
                        }
                        budget.tick()?;
                        if let Some(rule) = resolve_pair(&sys, &l1, 0, i, (pos, j), budget)? {
                            fresh = Some(rule);
                            break 'scan;
                        }
                    }
                }
            }
        }
        match fresh {
            Some(rule) => {
                if rule.lhs.len() > degree_bound {
                    return Err(Error::Resource(format!(
                        "completion produced a rule of degree {} beyond the bound {}",
                        rule.lhs.len(),
                        degree_bound
                    )));
                }
                sys.rules.push(rule);
            }
            None => break,
        }
    }
    Ok(sys)
}

/// Reduce the two one-step expansions of `sup` (rule `ri` at `pos_i`, rule
/// `rj` at `pos_j`) and orient any nonzero difference into a new rule.
fn resolve_pair(
    sys: &RewriteSystem,
    sup: &Word,
    pos_i: usize,
    ri: usize,
    (pos_j, rj): (usize, usize),
    budget: &mut Budget,
) -> Result<Option<Rule>, Error> {
    let expand = |pos: usize, ri: usize, budget: &mut Budget| -> Result<Poly, Error> {
        let rule = &sys.rules[ri];
        let l = rule.lhs.len();
        let mut p: Poly = BTreeMap::new();
        for (r, rc) in &rule.rhs {
            let mut nw = Vec::with_capacity(sup.len() - l + r.len());
            nw.extend_from_slice(&sup[..pos]);
            nw.extend_from_slice(r);
            nw.extend_from_slice(&sup[pos + l..]);
            poly_insert(&mut p, nw, rc.clone());
        }
        sys.reduce_poly(&p, budget)
    };
    let a = expand(pos_i, ri, budget)?;
    let b = expand(pos_j, rj, budget)?;
    let mut diff = a;
    for (w, c) in b {
        poly_insert(&mut diff, w, -&c);
    }
    Ok(orient(&diff))
}

/// Enumerate all words with the given letter content (mu[i] copies of letter
/// i) and count the irreducible ones.  This is the PBW dimension of the
/// weight space, to be compared against the Kostant partition count.
pub fn irreducible_word_count(sys: &RewriteSystem, mu: &[i64]) -> u64 {
    fn rec(sys: &RewriteSystem, remaining: &mut Vec<i64>, word: &mut Word, count: &mut u64) {
        if remaining.iter().all(|&c| c == 0) {
            if sys.is_irreducible(word) {
                *count += 1;
            }
            return;
        }
        for i in 0..remaining.len() {
            if remaining[i] == 0 {
                continue;
            }
            remaining[i] -= 1;
            word.push(i as Letter);
            // prune: a reducible prefix never extends to an irreducible word
            if sys.is_irreducible(word) {
                rec(sys, remaining, word, count);
            }
            word.pop();
            remaining[i] += 1;
        }
    }
    if mu.iter().any(|&c| c < 0) {
        return 0;
    }
    let mut remaining = mu.to_vec();
    let mut word = Vec::new();
    let mut count = 0;
    rec(sys, &mut remaining, &mut word, &mut count);
    count
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::{cartan_init, CartanSpec, RootDatum};

    fn complete_for(datum: &RootDatum, bound: usize) -> RewriteSystem {
        let mut rels = Vec::new();
        for i in 0..datum.n {
            for j in 0..datum.n {
                if i != j {
                    rels.push(serre_relation(i, j, datum.cartan[i][j], datum.d_s(i)));
                }
            }
        }
        let mut budget = Budget::new(5_000_000);
        complete(rels, bound, &mut budget).unwrap()
    }

    fn datum(lbl: &str) -> RootDatum {
        cartan_init(&CartanSpec::Series(lbl.into())).unwrap()
    }

    #[test]
    fn a1xa1_single_commutation_rule() {
        let sys = complete_for(&datum("A1xA1"), 12);
        assert_eq!(sys.rules.len(), 1);
        assert_eq!(sys.rules[0].lhs, vec![1, 0]);
        assert_eq!(sys.rules[0].rhs, vec![(vec![0, 1], QRat::one())]);
    }

    #[test]
    fn a2_completion_is_confluent_with_two_rules() {
        let sys = complete_for(&datum("A2"), 12);
        // both Serre orientations survive; no overlap generates new rules
        assert_eq!(sys.rules.len(), 2);
        let mut lhs: Vec<Word> = sys.rules.iter().map(|r| r.lhs.clone()).collect();
        lhs.sort();
        assert_eq!(lhs, vec![vec![1, 0, 0], vec![1, 1, 0]]);
    }

    #[test]
    fn pbw_counts_match_kostant_a2() {
        let d = datum("A2");
        let sys = complete_for(&d, 12);
        for m1 in 0..=3i64 {
            for m2 in 0..=3i64 {
                if m1 + m2 == 0 || m1 + m2 > 6 {
                    continue;
                }
                let mu = vec![m1, m2];
                assert_eq!(
                    irreducible_word_count(&sys, &mu),
                    d.kostant_partitions(&mu),
                    "mu = {mu:?}"
                );
            }
        }
    }

    #[test]
    fn pbw_counts_match_kostant_b2() {
        let d = datum("B2");
        let sys = complete_for(&d, 12);
        for m1 in 0..=3i64 {
            for m2 in 0..=4i64 {
                if m1 + m2 == 0 || m1 + m2 > 6 {
                    continue;
                }
                let mu = vec![m1, m2];
                assert_eq!(
                    irreducible_word_count(&sys, &mu),
                    d.kostant_partitions(&mu),
                    "mu = {mu:?}"
                );
            }
        }
    }

    #[test]
    fn reduction_annihilates_the_serre_relation() {
        let d = datum("A2");
        let sys = complete_for(&d, 12);
        let mut budget = Budget::new(100_000);
        let mut acc: Poly = BTreeMap::new();
        for (w, c) in serre_relation(0, 1, d.cartan[0][1], d.d_s(0)) {
            for (rw, rc) in sys.reduce_word(&w, &mut budget).unwrap() {
                poly_insert(&mut acc, rw, &rc * &c);
            }
        }
        assert!(acc.is_empty());
    }

    #[test]
    fn budget_exhaustion_reports_resource_error() {
        let d = datum("B2");
        let mut rels = Vec::new();
        for i in 0..2 {
            for j in 0..2 {
                if i != j {
                    rels.push(serre_relation(i, j, d.cartan[i][j], d.d_s(i)));
                }
            }
        }
        let mut tiny = Budget::new(3);
        assert!(matches!(
            complete(rels, 12, &mut tiny),
            Err(Error::Resource(_))
        ));
    }
}

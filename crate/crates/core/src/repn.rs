//! Finite-dimensional simple modules with an exact contravariant form.
//!
//! `simple_module` builds L(lambda) for a dominant integral weight: Verma
//! weight spaces spanned by irreducible y-words, the Gram matrices of the
//! contravariant form S(y_a v, y_b v) = value of the torus part of
//! kappa(y_a) y_b at lambda, the radical quotient per weight space, and the
//! induced action matrices of every generator.  On top of the module sit
//! the spherical invariant solver (joint eigenspace of the coideal
//! generators), the positivity report for S, the diagonal reweighting
//! search that makes kappa stabilize the coideal generators, and the
//! unitarity certificate tying all three together.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use crate::error::Error;
use crate::linalg::{qmat_kernel, qmat_pivot_columns, qmat_solve, QMat};
use crate::pair::{box_points, irreducible_words_of_content, PairPresentation};
use crate::qfield::{self, qbinom, QRat, Sign};
use crate::rootdata::{Lattice, RootDatum};
use crate::uq::hopf;
use crate::uq::{letter_content, AlgebraContext, Element, NormalWord, Word};

// ---------------------------------------------------------------------------
// matrix helpers
// ---------------------------------------------------------------------------

fn qm_zero(rows: usize, cols: usize) -> QMat {
    vec![vec![QRat::zero(); cols]; rows]
}

fn qm_identity(n: usize) -> QMat {
    let mut m = qm_zero(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = QRat::one();
    }
    m
}

fn qm_mul(a: &QMat, b: &QMat) -> QMat {
    let rows = a.len();
    let inner = b.len();
    let cols = if inner > 0 { b[0].len() } else { 0 };
    let mut out = qm_zero(rows, cols);
    for i in 0..rows {
        for (k, brow) in b.iter().enumerate() {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..cols {
                if brow[j].is_zero() {
                    continue;
                }
                let t = &a[i][k] * &brow[j];
                out[i][j] = &out[i][j] + &t;
            }
        }
    }
    out
}

fn qm_add(a: &QMat, b: &QMat) -> QMat {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x + y).collect())
        .collect()
}

fn qm_sub(a: &QMat, b: &QMat) -> QMat {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x - y).collect())
        .collect()
}

fn qm_scale(a: &QMat, c: &QRat) -> QMat {
    a.iter()
        .map(|r| r.iter().map(|x| x * c).collect())
        .collect()
}

fn qm_transpose(a: &QMat) -> QMat {
    let rows = a.len();
    let cols = if rows > 0 { a[0].len() } else { 0 };
    let mut out = qm_zero(cols, rows);
    for (i, row) in a.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            out[j][i] = v.clone();
        }
    }
    out
}

// ---------------------------------------------------------------------------
// simple modules
// ---------------------------------------------------------------------------

/// One weight space of a simple module.  The space sits at weight
/// lambda - eta; its basis is the coset of the listed irreducible y-words
/// applied to the highest weight vector, and `gram` is the (nondegenerate)
/// matrix of the contravariant form on that basis.
#[derive(Debug, Clone)]
pub struct WeightSpace {
    /// root coordinates of lambda minus the weight
    pub eta: Lattice,
    pub words: Vec<Word>,
    pub gram: QMat,
    /// position of this space's first vector in the global basis order
    pub offset: usize,
}

/// A simple highest-weight module in exact coordinates: weight spaces
/// ordered by (height, lex) of eta, one Gram block per space, and the
/// action matrix of every generator on the global basis.
#[derive(Debug, Clone)]
pub struct SimpleModule {
    pub datum: RootDatum,
    /// highest weight, fundamental-weight coordinates
    pub lambda: Lattice,
    pub spaces: Vec<WeightSpace>,
    pub dimension: usize,
    pub act_x: Vec<QMat>,
    pub act_y: Vec<QMat>,
    pub act_t: Vec<QMat>,
    pub act_t_inv: Vec<QMat>,
}

impl SimpleModule {
    /// s-exponent of the character of tau(mu) on the weight space at
    /// lambda - eta.
    pub fn weight_exponent(&self, mu: &[i64], eta: &[i64]) -> i64 {
        2 * (self.datum.weight_root_pairing(&self.lambda, mu) - self.datum.pairing(mu, eta))
    }

    /// Diagonal action matrix of tau(mu).
    pub fn torus_matrix(&self, mu: &[i64]) -> QMat {
        let mut m = qm_zero(self.dimension, self.dimension);
        for sp in &self.spaces {
            let c = QRat::s_pow(self.weight_exponent(mu, &sp.eta));
            for k in 0..sp.words.len() {
                m[sp.offset + k][sp.offset + k] = c.clone();
            }
        }
        m
    }

    /// Action matrix of an arbitrary element, assembled from the stored
    /// generator matrices.
    pub fn element_matrix(&self, a: &Element) -> Result<QMat, Error> {
        let n = self.datum.n;
        let dim = self.dimension;
        let mut out = qm_zero(dim, dim);
        for (w, c) in &a.terms {
            if w.t.len() != n || w.y.iter().chain(&w.x).any(|&l| l as usize >= n) {
                return Err(Error::Argument(
                    "element does not match the module's rank".into(),
                ));
            }
            let mut acc = qm_identity(dim);
            for &l in w.x.iter().rev() {
                acc = qm_mul(&self.act_x[l as usize], &acc);
            }
            acc = qm_mul(&self.torus_matrix(&w.t), &acc);
            for &l in w.y.iter().rev() {
                acc = qm_mul(&self.act_y[l as usize], &acc);
            }
            out = qm_add(&out, &qm_scale(&acc, c));
        }
        Ok(out)
    }

    /// Block-diagonal Gram matrix of the contravariant form on the global
    /// basis.
    pub fn gram_global(&self) -> QMat {
        let mut m = qm_zero(self.dimension, self.dimension);
        for sp in &self.spaces {
            for (a, row) in sp.gram.iter().enumerate() {
                for (b, v) in row.iter().enumerate() {
                    m[sp.offset + a][sp.offset + b] = v.clone();
                }
            }
        }
        m
    }
}

fn y_word(n: usize, w: &Word) -> Element {
    let mut nw = NormalWord::unit(n);
    nw.y = w.clone();
    Element::from_word(nw, QRat::one())
}

/// Value of the torus part of `a` on the highest weight vector: every
/// torus character tau(mu) evaluates to q^{(mu, lambda)} and everything
/// with a y or x letter is dropped.
fn highest_weight_value(datum: &RootDatum, lambda_fw: &[i64], a: &Element) -> QRat {
    let mut acc = QRat::zero();
    for (w, c) in &a.terms {
        if w.is_torus() {
            let e = 2 * datum.weight_root_pairing(lambda_fw, &w.t);
            acc = &acc + &(c * &QRat::s_pow(e));
        }
    }
    acc
}

struct VermaBlock {
    eta: Lattice,
    words: Vec<Word>,
    lookup: BTreeMap<Word, usize>,
    /// full Gram of the contravariant form on all irreducible words
    full: QMat,
    /// greedy maximal subset of words whose cosets stay independent
    chosen: Vec<usize>,
    /// index into the module's space list, when the rank is positive
    space: Option<usize>,
}

/// Coordinates of a linear combination of Verma words (full coordinates on
/// `blk.words`) in the chosen coset basis of the target space: solve the
/// nondegenerate quotient Gram against the pairings with the basis words.
fn quotient_coordinates(
    blk: &VermaBlock,
    gram: &QMat,
    fullvec: &[QRat],
) -> Result<Vec<QRat>, Error> {
    let rhs: Vec<QRat> = blk
        .chosen
        .iter()
        .map(|&r| {
            let mut acc = QRat::zero();
            for (m, f) in fullvec.iter().enumerate() {
                if !f.is_zero() {
                    acc = &acc + &(&blk.full[r][m] * f);
                }
            }
            acc
        })
        .collect();
    let Some((coords, kernel)) = qmat_solve(gram, &rhs) else {
        return Err(Error::Internal("quotient Gram solve is inconsistent".into()));
    };
    if !kernel.is_empty() {
        return Err(Error::Internal("quotient Gram is singular".into()));
    }
    Ok(coords)
}

/// Build the simple module with the given dominant highest weight
/// (fundamental-weight coordinates).
///
/// Weight spaces are the points of the box below lambda - w0(lambda); each
/// carries the Gram matrix of the contravariant form on its irreducible
/// y-words, and the coset basis is the greedy maximal independent subset.
/// The weight-space dimensions are cross-checked against the Weyl
/// dimension before any action matrix is induced.
pub fn simple_module(ctx: &AlgebraContext, lambda_fw: &[i64]) -> Result<SimpleModule, Error> {
    let datum = ctx.datum.clone();
    let n = datum.n;
    if lambda_fw.len() != n {
        return Err(Error::Argument("weight has wrong rank".into()));
    }
    if lambda_fw.iter().any(|&m| m < 0) {
        return Err(Error::Argument(
            "highest weight must be dominant integral".into(),
        ));
    }
    let eta_max = datum.dominant_drop(lambda_fw);
    let depth = RootDatum::ht(&eta_max);
    if depth as usize > ctx.max_degree {
        return Err(Error::Resource(format!(
            "module depth {depth} exceeds the degree bound {}",
            ctx.max_degree
        )));
    }

    let mut blocks = Vec::new();
    for eta in box_points(&eta_max) {
        let words = irreducible_words_of_content(ctx, &eta);
        let mut kappa_img = Vec::with_capacity(words.len());
        for w in &words {
            kappa_img.push(hopf::kappa(ctx, &y_word(n, w))?);
        }
        let m = words.len();
        let mut full = qm_zero(m, m);
        for a in 0..m {
            for b in 0..m {
                let prod = ctx.mul(&kappa_img[a], &y_word(n, &words[b]))?;
                full[a][b] = highest_weight_value(&datum, lambda_fw, &prod);
            }
        }
        let chosen = qmat_pivot_columns(&full);
        let lookup = words
            .iter()
            .cloned()
            .enumerate()
            .map(|(k, w)| (w, k))
            .collect();
        blocks.push(VermaBlock {
            eta,
            words,
            lookup,
            full,
            chosen,
            space: None,
        });
    }

    let mut spaces = Vec::new();
    let mut offset = 0usize;
    for blk in &mut blocks {
        if blk.chosen.is_empty() {
            continue;
        }
        let words = blk.chosen.iter().map(|&k| blk.words[k].clone()).collect();
        let gram: QMat = blk
            .chosen
            .iter()
            .map(|&r| blk.chosen.iter().map(|&c| blk.full[r][c].clone()).collect())
            .collect();
        blk.space = Some(spaces.len());
        spaces.push(WeightSpace {
            eta: blk.eta.clone(),
            words,
            gram,
            offset,
        });
        offset += blk.chosen.len();
    }
    let dimension = offset;
    if BigInt::from(dimension) != datum.weyl_dim(lambda_fw) {
        return Err(Error::Internal(
            "weight-space dimensions do not sum to the Weyl dimension".into(),
        ));
    }

    let by_eta: BTreeMap<Lattice, usize> = blocks
        .iter()
        .enumerate()
        .map(|(k, b)| (b.eta.clone(), k))
        .collect();

    // induce the x_i and y_i matrices column by column: multiply the
    // generator onto the coset representative, evaluate the torus part on
    // the highest weight vector term by term, and project each Verma
    // component back to the coset basis.  Components outside the weight
    // box lie in the radical and are dropped.
    let mut act_x = vec![qm_zero(dimension, dimension); n];
    let mut act_y = vec![qm_zero(dimension, dimension); n];
    for blk in &blocks {
        let Some(si) = blk.space else { continue };
        let src_offset = spaces[si].offset;
        for (local, &wk) in blk.chosen.iter().enumerate() {
            let col = src_offset + local;
            let rep = y_word(n, &blk.words[wk]);
            for i in 0..n {
                for (gen, mats) in [(ctx.gen_x(i)?, &mut act_x), (ctx.gen_y(i)?, &mut act_y)] {
                    let u = ctx.mul(&gen, &rep)?;
                    let mut per_target: BTreeMap<Lattice, Vec<QRat>> = BTreeMap::new();
                    for (w, c) in &u.terms {
                        if !w.x.is_empty() {
                            continue;
                        }
                        let teta = letter_content(&w.y, n);
                        let Some(&bi) = by_eta.get(&teta) else { continue };
                        let target = &blocks[bi];
                        let Some(&wi) = target.lookup.get(&w.y) else {
                            return Err(Error::Internal(
                                "normal-form word missing from the Verma basis".into(),
                            ));
                        };
                        let f =
                            c * &QRat::s_pow(2 * datum.weight_root_pairing(lambda_fw, &w.t));
                        let entry = per_target
                            .entry(teta)
                            .or_insert_with(|| vec![QRat::zero(); target.words.len()]);
                        entry[wi] = &entry[wi] + &f;
                    }
                    for (teta, fullvec) in per_target {
                        let target = &blocks[by_eta[&teta]];
                        let Some(ts) = target.space else { continue };
                        let coords =
                            quotient_coordinates(target, &spaces[ts].gram, &fullvec)?;
                        for (k, v) in coords.into_iter().enumerate() {
                            mats[i][spaces[ts].offset + k][col] = v;
                        }
                    }
                }
            }
        }
    }

    let mut module = SimpleModule {
        datum,
        lambda: lambda_fw.to_vec(),
        spaces,
        dimension,
        act_x,
        act_y,
        act_t: Vec::new(),
        act_t_inv: Vec::new(),
    };
    for i in 0..n {
        let ei = module.datum.simple_root(i);
        module.act_t.push(module.torus_matrix(&ei));
        let neg: Lattice = ei.iter().map(|v| -v).collect();
        module.act_t_inv.push(module.torus_matrix(&neg));
    }
    Ok(module)
}

// ---------------------------------------------------------------------------
// defining relations as matrix identities
// ---------------------------------------------------------------------------

/// Check every defining relation of the algebra on the action matrices and
/// return a description of each violation (empty means the matrices form a
/// genuine representation).
pub fn action_relation_violations(ctx: &AlgebraContext, m: &SimpleModule) -> Vec<String> {
    let n = m.datum.n;
    let dim = m.dimension;
    let id = qm_identity(dim);
    let zero = qm_zero(dim, dim);
    let mut out = Vec::new();

    for i in 0..n {
        if qm_mul(&m.act_t[i], &m.act_t_inv[i]) != id {
            out.push(format!("t{0} t{0}^-1 is not the identity", i + 1));
        }
    }
    for i in 0..n {
        for j in 0..n {
            let e = m.datum.gram[i][j];
            let conj = qm_mul(&m.act_t[i], &qm_mul(&m.act_x[j], &m.act_t_inv[i]));
            if conj != qm_scale(&m.act_x[j], &QRat::s_pow(2 * e)) {
                out.push(format!("torus conjugation fails on t{} x{}", i + 1, j + 1));
            }
            let conj = qm_mul(&m.act_t[i], &qm_mul(&m.act_y[j], &m.act_t_inv[i]));
            if conj != qm_scale(&m.act_y[j], &QRat::s_pow(-2 * e)) {
                out.push(format!("torus conjugation fails on t{} y{}", i + 1, j + 1));
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            let lhs = qm_sub(
                &qm_mul(&m.act_x[i], &m.act_y[j]),
                &qm_mul(&m.act_y[j], &m.act_x[i]),
            );
            let rhs = if i == j {
                qm_scale(
                    &qm_sub(&m.act_t[i], &m.act_t_inv[i]),
                    &ctx.cross_constant(i),
                )
            } else {
                zero.clone()
            };
            if lhs != rhs {
                out.push(format!("cross relation fails on x{} y{}", i + 1, j + 1));
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let bound = (1 - m.datum.cartan[i][j]) as u32;
            for (mats, tag) in [(&m.act_x, "x"), (&m.act_y, "y")] {
                let mut powers = vec![id.clone()];
                for k in 1..=bound as usize {
                    powers.push(qm_mul(&powers[k - 1], &mats[i]));
                }
                let mut acc = zero.clone();
                for k in 0..=bound {
                    let mut c = qbinom(bound, k, m.datum.d_s(i)).expect("k bounded above");
                    if k % 2 == 1 {
                        c = -&c;
                    }
                    let term = qm_mul(
                        &powers[(bound - k) as usize],
                        &qm_mul(&mats[j], &powers[k as usize]),
                    );
                    acc = qm_add(&acc, &qm_scale(&term, &c));
                }
                if acc != zero {
                    out.push(format!("{tag} Serre relation fails on ({}, {})", i + 1, j + 1));
                }
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// spherical invariants
// ---------------------------------------------------------------------------

/// Solve for the vectors on which every generator of the coideal acts by
/// its counit: B_i v = s_i v for the coideal generators, x_j v = y_j v = 0
/// and t_j v = v on the fixed part, tau(mu) v = v for the invariant torus.
/// Returns the kernel dimension and an exact basis in global coordinates.
pub fn invariants(
    module: &SimpleModule,
    pair: &PairPresentation,
) -> Result<(usize, Vec<Vec<QRat>>), Error> {
    if pair.ctx.datum != module.datum {
        return Err(Error::Argument(
            "module and pair are over different Cartan data".into(),
        ));
    }
    let n = module.datum.n;
    let id = qm_identity(module.dimension);
    let mut rows: QMat = Vec::new();
    for i in 0..n {
        if pair.theta.pi_theta.contains(&i) {
            rows.extend(module.act_x[i].iter().cloned());
            rows.extend(module.act_y[i].iter().cloned());
            rows.extend(qm_sub(&module.act_t[i], &id));
        } else {
            let s_i = pair
                .s_params
                .get(&i)
                .cloned()
                .unwrap_or_else(QRat::zero);
            let mb = module.element_matrix(pair.generator(i)?)?;
            rows.extend(qm_sub(&mb, &qm_scale(&id, &s_i)));
        }
    }
    for b in &pair.t_theta_basis {
        rows.extend(qm_sub(&module.torus_matrix(b), &id));
    }
    let basis = qmat_kernel(&rows);
    Ok((basis.len(), basis))
}

// ---------------------------------------------------------------------------
// positivity of the contravariant form
// ---------------------------------------------------------------------------

/// Orthogonalized norms of one weight space.
#[derive(Debug, Clone)]
pub struct SpaceNorms {
    pub eta: Lattice,
    pub norms: Vec<QRat>,
    pub signs: Vec<Sign>,
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct PositivityReport {
    pub spaces: Vec<SpaceNorms>,
    pub pass: bool,
}

/// Diagonal of a pivoted LDL^T decomposition of a symmetric matrix.  Stops
/// early when no nonzero diagonal entry remains; a positive form always
/// completes, so an early stop (or any nonpositive pivot) refutes
/// positivity.
fn ldlt_norms(g: &QMat) -> Vec<QRat> {
    let k = g.len();
    let mut m = g.to_vec();
    let mut alive: Vec<usize> = (0..k).collect();
    let mut out = Vec::new();
    while !alive.is_empty() {
        let Some(pos) = alive.iter().position(|&i| !m[i][i].is_zero()) else {
            break;
        };
        let p = alive.remove(pos);
        let d = m[p][p].clone();
        for &a in &alive {
            for &b in &alive {
                let t = &(&m[a][p] * &m[p][b]) / &d;
                m[a][b] = &m[a][b] - &t;
            }
        }
        out.push(d);
    }
    out
}

/// Sign report for the contravariant form: each weight space is
/// orthogonalized exactly and every resulting norm must be positive in the
/// ordered coefficient field.
pub fn shapovalov_positivity(module: &SimpleModule) -> PositivityReport {
    let mut spaces = Vec::new();
    let mut pass = true;
    for sp in &module.spaces {
        let norms = ldlt_norms(&sp.gram);
        let signs: Vec<Sign> = norms.iter().map(qfield::sign).collect();
        let ok = norms.len() == sp.words.len() && signs.iter().all(|s| *s == Sign::Positive);
        pass &= ok;
        spaces.push(SpaceNorms {
            eta: sp.eta.clone(),
            norms,
            signs,
            pass: ok,
        });
    }
    PositivityReport { spaces, pass }
}

// ---------------------------------------------------------------------------
// diagonal reweightings and unitarity
// ---------------------------------------------------------------------------

/// Image of an element under the diagonal Hopf automorphism
/// x_i -> s^{e_i} x_i, y_i -> s^{-e_i} y_i, torus fixed.
pub fn rescale_element(a: &Element, exponents: &BTreeMap<usize, i64>) -> Element {
    let mut out = Element::zero();
    for (w, c) in &a.terms {
        let n = w.t.len();
        let xs = letter_content(&w.x, n);
        let ys = letter_content(&w.y, n);
        let mut e = 0i64;
        for (&i, &ex) in exponents {
            e += ex * (xs[i] - ys[i]);
        }
        out.add_term(w.clone(), c * &QRat::s_pow(e));
    }
    out
}

fn proportional(a: &Element, b: &Element) -> bool {
    if a.is_zero() || a.terms.len() != b.terms.len() || !a.terms.keys().eq(b.terms.keys()) {
        return false;
    }
    let (w, c) = a.terms.iter().next().expect("nonzero element");
    let r = c / &b.coeff(w);
    b.scale(&r) == *a
}

/// Search the diagonal reweightings with exponents in [-8, 8] for one that
/// makes kappa map each rescaled coideal generator to a scalar-and-
/// invariant-torus multiple of a rescaled generator.  Exponents on the
/// fixed part are normalized to zero (kappa stabilizes that subalgebra for
/// any reweighting).  Returns the exponent of s per index, or None when no
/// reweighting in the search box works.
pub fn find_real_form_scaling(
    pair: &PairPresentation,
) -> Result<Option<BTreeMap<usize, i64>>, Error> {
    const BOUND: i64 = 8;
    let ctx = &pair.ctx;
    let n = ctx.n();
    let free: Vec<usize> = (0..n).filter(|i| !pair.theta.pi_theta.contains(i)).collect();
    let mut exps: BTreeMap<usize, i64> = (0..n).map(|i| (i, 0)).collect();
    if free.is_empty() {
        return Ok(Some(exps));
    }

    // kappa images and the torus-shifted comparison targets do not depend
    // on the reweighting: rescaling commutes with kappa up to negating the
    // exponents, so everything expensive is computed once up front.
    let mut kappa_img: BTreeMap<usize, Element> = BTreeMap::new();
    let mut targets: BTreeMap<usize, Vec<Element>> = BTreeMap::new();
    for &i in &free {
        let k = hopf::kappa(ctx, pair.generator(i)?)?;
        let mut cand = Vec::new();
        for &j in &free {
            for w in k.terms.keys() {
                if !w.x.is_empty() || w.y.as_slice() != [j as u8] {
                    continue;
                }
                let mut mu = w.t.clone();
                mu[j] -= 1;
                if !pair.theta.theta.fixes(&mu) {
                    continue;
                }
                cand.push(ctx.mul(&ctx.torus(&mu)?, pair.generator(j)?)?);
            }
        }
        kappa_img.insert(i, k);
        targets.insert(i, cand);
    }

    let mut shapes: Vec<Vec<i64>> = vec![Vec::new()];
    for _ in 0..free.len() {
        let mut next = Vec::new();
        for s in &shapes {
            for e in -BOUND..=BOUND {
                let mut t = s.clone();
                t.push(e);
                next.push(t);
            }
        }
        shapes = next;
    }
    shapes.sort_by_key(|v| (v.iter().map(|e| e.abs()).sum::<i64>(), v.clone()));

    'outer: for sh in &shapes {
        for (k, &i) in free.iter().enumerate() {
            exps.insert(i, sh[k]);
        }
        let neg: BTreeMap<usize, i64> = exps.iter().map(|(&i, &e)| (i, -e)).collect();
        for &i in &free {
            let img = rescale_element(&kappa_img[&i], &neg);
            let hit = targets[&i]
                .iter()
                .any(|t| proportional(&img, &rescale_element(t, &exps)));
            if !hit {
                continue 'outer;
            }
        }
        return Ok(Some(exps));
    }
    Ok(None)
}

/// Per-generator contravariance of the form, plus its symmetry and
/// positivity: the three conditions of a unitary module structure over the
/// rescaled coideal.
#[derive(Debug, Clone)]
pub struct UnitaryReport {
    pub contravariant: Vec<(String, bool)>,
    pub symmetric: bool,
    pub positive: bool,
    pub unitary: bool,
}

/// Verify S(b v, w) = S(v, kappa(b) w) as an exact matrix identity for
/// every rescaled generator of the coideal, together with symmetry and
/// positivity of the form.
pub fn unitary_check(
    module: &SimpleModule,
    pair: &PairPresentation,
    scaling: &BTreeMap<usize, i64>,
) -> Result<UnitaryReport, Error> {
    if pair.ctx.datum != module.datum {
        return Err(Error::Argument(
            "module and pair are over different Cartan data".into(),
        ));
    }
    let ctx = &pair.ctx;
    let n = module.datum.n;
    let s = module.gram_global();
    let symmetric = s == qm_transpose(&s);
    let positive = shapovalov_positivity(module).pass;

    let mut gens: Vec<(String, Element)> = Vec::new();
    for i in 0..n {
        gens.push((format!("B{}", i + 1), pair.generator(i)?.clone()));
    }
    for &j in &pair.theta.pi_theta {
        gens.push((format!("x{}", j + 1), ctx.gen_x(j)?));
    }
    for b in &pair.t_theta_basis {
        let coords: Vec<String> = b.iter().map(|k| k.to_string()).collect();
        gens.push((format!("K[{}]", coords.join(",")), ctx.torus(b)?));
    }

    let mut contravariant = Vec::new();
    let mut all = true;
    for (label, g) in gens {
        let b = rescale_element(&g, scaling);
        let mb = module.element_matrix(&b)?;
        let mkb = module.element_matrix(&hopf::kappa(ctx, &b)?)?;
        let ok = qm_mul(&qm_transpose(&mb), &s) == qm_mul(&s, &mkb);
        all &= ok;
        contravariant.push((label, ok));
    }
    Ok(UnitaryReport {
        contravariant,
        symmetric,
        positive,
        unitary: symmetric && positive && all,
    })
}

// ---------------------------------------------------------------------------
// tests
// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use crate::involution::validate_satake;
    use crate::linalg::qmat_rank;
    use crate::pair::build_pair;
    use crate::rootdata::{cartan_init, spherical_weight_test, CartanSpec, DiagramMap, RootDatum};
    use std::collections::BTreeSet;

    fn datum(lbl: &str) -> RootDatum {
        cartan_init(&CartanSpec::Series(lbl.into())).unwrap()
    }

    fn ctx(lbl: &str) -> AlgebraContext {
        AlgebraContext::with_defaults(datum(lbl)).unwrap()
    }

    fn pair(
        lbl: &str,
        pi: &[usize],
        d: DiagramMap,
        c: &[(usize, QRat)],
        s: &[(usize, QRat)],
    ) -> PairPresentation {
        let dm = datum(lbl);
        let pts: BTreeSet<usize> = pi.iter().copied().collect();
        let td = validate_satake(&dm, &pts, &d).unwrap();
        let cx = AlgebraContext::with_defaults(dm).unwrap();
        build_pair(
            td,
            cx,
            c.iter().cloned().collect(),
            s.iter().cloned().collect(),
        )
        .unwrap()
    }

    #[test]
    fn trivial_module_is_one_dimensional() {
        let c = ctx("A1");
        let m = simple_module(&c, &[0]).unwrap();
        assert_eq!(m.dimension, 1);
        assert_eq!(m.spaces.len(), 1);
        assert_eq!(m.spaces[0].gram, vec![vec![QRat::one()]]);
        assert!(action_relation_violations(&c, &m).is_empty());

        let p = pair("A1", &[], DiagramMap::Id, &[], &[]);
        let (dim, basis) = invariants(&m, &p).unwrap();
        assert_eq!(dim, 1);
        assert_eq!(basis.len(), 1);
        assert!(shapovalov_positivity(&m).pass);
    }

    #[test]
    fn rank_one_module_matches_the_frozen_gram_value() {
        let c = ctx("A1");
        let m = simple_module(&c, &[2]).unwrap();
        assert_eq!(m.dimension, 3);
        assert_eq!(m.spaces.len(), 3);
        // S(yv, yv) = q^-2 (q + q^-1), frozen from the cross relation and
        // the torus character at the highest weight
        let expected = &QRat::q_pow(-1) + &QRat::q_pow(-3);
        assert_eq!(m.spaces[1].eta, vec![1]);
        assert_eq!(m.spaces[1].gram, vec![vec![expected]]);
        assert!(action_relation_violations(&c, &m).is_empty());
    }

    #[test]
    fn vector_module_of_the_rank_two_datum() {
        let c = ctx("A2");
        let m = simple_module(&c, &[1, 0]).unwrap();
        assert_eq!(m.dimension, 3);
        let etas: Vec<Lattice> = m.spaces.iter().map(|s| s.eta.clone()).collect();
        assert_eq!(etas, vec![vec![0, 0], vec![1, 0], vec![1, 1]]);
        assert!(action_relation_violations(&c, &m).is_empty());
    }

    #[test]
    fn adjoint_module_action_relations() {
        let c = ctx("A2");
        let m = simple_module(&c, &[1, 1]).unwrap();
        assert_eq!(m.dimension, 8);
        assert!(action_relation_violations(&c, &m).is_empty());
        // torus generators act on the highest weight vector by
        // q^{(lambda, alpha_i)}
        for i in 0..2 {
            let e = 2 * m.datum.weight_root_pairing(&m.lambda, &m.datum.simple_root(i));
            assert_eq!(m.act_t[i][0][0], QRat::s_pow(e));
        }
    }

    #[test]
    fn weights_outside_the_contract_are_rejected() {
        let c = ctx("A1");
        assert!(matches!(
            simple_module(&c, &[-1]),
            Err(Error::Argument(_))
        ));
        assert!(matches!(
            simple_module(&c, &[1, 0]),
            Err(Error::Argument(_))
        ));
        assert!(matches!(
            simple_module(&c, &[30]),
            Err(Error::Resource(_))
        ));
    }

    #[test]
    fn invariant_dimension_matches_the_spherical_test_in_rank_one() {
        let p = pair("A1", &[], DiagramMap::Id, &[], &[]);
        for m in 0..=4 {
            let module = simple_module(&p.ctx, &[m]).unwrap();
            let (dim, _) = invariants(&module, &p).unwrap();
            assert!(dim <= 1, "m = {m}: invariant dimension exceeds one");
            let spherical =
                spherical_weight_test(&p.ctx.datum, &p.theta.theta, &[m]).unwrap();
            assert_eq!(dim == 1, spherical, "m = {m}");
            assert_eq!(dim == 1, m % 2 == 0, "m = {m}");
        }
    }

    #[test]
    fn split_rank_two_invariants_match_the_spherical_test() {
        let p = pair("A2", &[], DiagramMap::Id, &[], &[]);
        for lam in [[0, 0], [1, 0], [2, 0], [1, 1]] {
            let module = simple_module(&p.ctx, &lam).unwrap();
            let (dim, _) = invariants(&module, &p).unwrap();
            assert!(dim <= 1, "lambda = {lam:?}");
            let spherical =
                spherical_weight_test(&p.ctx.datum, &p.theta.theta, &lam).unwrap();
            assert_eq!(dim == 1, spherical, "lambda = {lam:?}");
        }
        // the doubled fundamental weight is the first spherical one
        let module = simple_module(&p.ctx, &[2, 0]).unwrap();
        assert_eq!(invariants(&module, &p).unwrap().0, 1);
        let module = simple_module(&p.ctx, &[1, 0]).unwrap();
        assert_eq!(invariants(&module, &p).unwrap().0, 0);
    }

    #[test]
    fn positivity_on_the_rank_one_ladder() {
        let c = ctx("A1");
        let m = simple_module(&c, &[4]).unwrap();
        assert_eq!(m.dimension, 5);
        let report = shapovalov_positivity(&m);
        assert!(report.pass);
        assert_eq!(report.spaces.len(), 5);
        for sp in &report.spaces {
            assert_eq!(sp.norms.len(), 1);
            assert_eq!(sp.signs, vec![Sign::Positive]);
        }
    }

    #[test]
    fn scaling_search_solves_the_quartic_condition() {
        // split rank one: kappa fixes the generator set once x gains a
        // factor of q, so the exponent of s is two
        let p1 = pair("A1", &[], DiagramMap::Id, &[], &[]);
        let sc = find_real_form_scaling(&p1).unwrap().unwrap();
        assert_eq!(sc[&0], 2);

        // the double flip couples the two exponents through one orbit
        let p5 = pair("A1xA1", &[], DiagramMap::Flip, &[], &[]);
        let sc = find_real_form_scaling(&p5).unwrap().unwrap();
        assert_eq!(sc[&0] + sc[&1], 2);

        // the parity-violating datum has no compatible reweighting: kappa
        // sends its rank-one generator to a bare Chevalley generator
        let p4 = pair("A2", &[0], DiagramMap::Id, &[], &[]);
        assert!(find_real_form_scaling(&p4).unwrap().is_none());
    }

    #[test]
    fn unitary_reports_on_the_split_rank_one_modules() {
        let p = pair("A1", &[], DiagramMap::Id, &[], &[]);
        let sc = find_real_form_scaling(&p).unwrap().unwrap();
        for m in [0, 2, 4] {
            let module = simple_module(&p.ctx, &[m]).unwrap();
            let report = unitary_check(&module, &p, &sc).unwrap();
            assert!(report.symmetric, "m = {m}");
            assert!(report.positive, "m = {m}");
            assert!(
                report.contravariant.iter().all(|(_, ok)| *ok),
                "m = {m}: {:?}",
                report.contravariant
            );
            assert!(report.unitary, "m = {m}");
        }
    }

    /// Smallest basis-closure of `seed` under the given operators, as a row
    /// matrix.
    fn span_closure(ops: &[QMat], seed: &[Vec<QRat>]) -> QMat {
        let mut basis: QMat = seed.to_vec();
        loop {
            let mut grew = false;
            let current = basis.clone();
            for op in ops {
                for v in &current {
                    let img: Vec<QRat> = (0..op.len())
                        .map(|r| {
                            let mut acc = QRat::zero();
                            for (k, c) in v.iter().enumerate() {
                                if !c.is_zero() {
                                    acc = &acc + &(&op[r][k] * c);
                                }
                            }
                            acc
                        })
                        .collect();
                    let mut trial = basis.clone();
                    trial.push(img);
                    if qmat_rank(&trial) > qmat_rank(&basis) {
                        basis = trial;
                        grew = true;
                    }
                }
            }
            if !grew {
                return basis;
            }
        }
    }

    #[test]
    fn orthogonal_complement_of_the_invariant_line_is_stable() {
        // complete-reducibility witness: the form-orthogonal complement of
        // the submodule generated by the invariant vector is again stable
        // under the rescaled coideal generator
        let p = pair("A1", &[], DiagramMap::Id, &[], &[]);
        let sc = find_real_form_scaling(&p).unwrap().unwrap();
        for m in [2, 4] {
            let module = simple_module(&p.ctx, &[m]).unwrap();
            let b = rescale_element(p.generator(0).unwrap(), &sc);
            let mb = module.element_matrix(&b).unwrap();
            let (dim, basis) = invariants(&module, &p).unwrap();
            assert_eq!(dim, 1);

            let sub = span_closure(&[mb.clone()], &basis);
            let s = module.gram_global();
            // rows of sub . S cut out the orthogonal complement
            let cutter = qm_mul(&sub, &s);
            let complement = qmat_kernel(&cutter);
            assert_eq!(complement.len(), module.dimension - sub.len());
            for v in &complement {
                let img: Vec<QRat> = (0..module.dimension)
                    .map(|r| {
                        let mut acc = QRat::zero();
                        for (k, c) in v.iter().enumerate() {
                            acc = &acc + &(&mb[r][k] * c);
                        }
                        acc
                    })
                    .collect();
                for row in &cutter {
                    let mut acc = QRat::zero();
                    for (k, c) in img.iter().enumerate() {
                        acc = &acc + &(&row[k] * c);
                    }
                    assert!(acc.is_zero(), "complement is not stable at m = {m}");
                }
            }
        }
    }

    #[test]
    fn element_matrices_compose_like_the_algebra() {
        let c = ctx("A1");
        let m = simple_module(&c, &[2]).unwrap();
        let x = c.gen_x(0).unwrap();
        let y = c.gen_y(0).unwrap();
        let xy = c.mul(&x, &y).unwrap();
        let lhs = m.element_matrix(&xy).unwrap();
        let rhs = qm_mul(
            &m.element_matrix(&x).unwrap(),
            &m.element_matrix(&y).unwrap(),
        );
        assert_eq!(lhs, rhs);
    }
}

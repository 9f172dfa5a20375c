//! Finite-type root data, lattice involutions, restricted root systems, and
//! the weight-lattice tests used by the coideal machinery.
//!
//! Roots and torus exponents live in the root lattice (integer coordinates in
//! the simple-root basis); dominant weights are handled in fundamental-weight
//! coordinates so that all pairings stay in Z.

use crate::error::Error;
use crate::linalg::{integer_kernel, rmat_solve, RMat};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::{BTreeMap, BTreeSet};

pub type Lattice = Vec<i64>;

// ---------------------------------------------------------------------------
// root datum
// ---------------------------------------------------------------------------

/// A finite-type Cartan datum: Cartan matrix, symmetrizing inner product
/// (shortest roots have squared length 2), and the closed set of positive
/// roots in simple-root coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootDatum {
    pub label: String,
    pub n: usize,
    /// a[i][j] = 2 (alpha_i, alpha_j) / (alpha_i, alpha_i)
    pub cartan: Vec<Vec<i64>>,
    /// gram[i][j] = (alpha_i, alpha_j)
    pub gram: Vec<Vec<i64>>,
    pub pos_roots: Vec<Lattice>,
    root_set: BTreeSet<Lattice>,
}

/// How a Cartan datum is requested: by series label or explicit matrix.
#[derive(Debug, Clone)]
pub enum CartanSpec {
    Series(String),
    Matrix(Vec<Vec<i64>>),
}

fn series_matrix(label: &str) -> Result<Vec<Vec<i64>>, Error> {
    let norm = label.trim().to_ascii_uppercase().replace('*', "X");
    if norm == "A1XA1" {
        return Ok(vec![vec![2, 0], vec![0, 2]]);
    }
    if let Some(rank) = norm.strip_prefix('A').and_then(|r| r.parse::<usize>().ok()) {
        if rank >= 1 {
            let mut m = vec![vec![0i64; rank]; rank];
            for i in 0..rank {
                m[i][i] = 2;
                if i + 1 < rank {
                    m[i][i + 1] = -1;
                    m[i + 1][i] = -1;
                }
            }
            return Ok(m);
        }
    }
    if norm == "B2" {
        // alpha1 long, alpha2 short
        return Ok(vec![vec![2, -1], vec![-2, 2]]);
    }
    if norm == "G2" {
        // alpha1 short, alpha2 long
        return Ok(vec![vec![2, -3], vec![-1, 2]]);
    }
    Err(Error::Validation(format!(
        "unknown Cartan series label '{label}'"
    )))
}

/// Build and validate a root datum.
pub fn cartan_init(spec: &CartanSpec) -> Result<RootDatum, Error> {
    let (matrix, label) = match spec {
        CartanSpec::Series(lbl) => (series_matrix(lbl)?, lbl.trim().to_string()),
        CartanSpec::Matrix(m) => (m.clone(), "custom".to_string()),
    };
    let n = matrix.len();
    if n == 0 || matrix.iter().any(|r| r.len() != n) {
        return Err(Error::Validation("Cartan matrix must be square and nonempty".into()));
    }
    for i in 0..n {
        if matrix[i][i] != 2 {
            return Err(Error::Validation(format!("Cartan diagonal entry a_{}{} != 2", i + 1, i + 1)));
        }
        for j in 0..n {
            if i != j {
                if matrix[i][j] > 0 {
                    return Err(Error::Validation("off-diagonal Cartan entries must be <= 0".into()));
                }
                if (matrix[i][j] == 0) != (matrix[j][i] == 0) {
                    return Err(Error::Validation("Cartan zero pattern must be symmetric".into()));
                }
            }
        }
    }
    // symmetrize: d_i a_ij = d_j a_ji with d rational, scaled so min (alpha,alpha) = 2
    let mut d: Vec<Option<BigRational>> = vec![None; n];
    for start in 0..n {
        if d[start].is_some() {
            continue;
        }
        d[start] = Some(BigRational::one());
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            for j in 0..n {
                if matrix[i][j] != 0 && i != j {
                    let dj = d[i].clone().unwrap()
                        * BigRational::new(BigInt::from(matrix[i][j]), BigInt::from(matrix[j][i]));
                    match &d[j] {
                        None => {
                            d[j] = Some(dj);
                            stack.push(j);
                        }
                        Some(existing) => {
                            if *existing != dj {
                                return Err(Error::Validation("Cartan matrix is not symmetrizable".into()));
                            }
                        }
                    }
                }
            }
        }
    }
    let d: Vec<BigRational> = d.into_iter().map(|x| x.unwrap()).collect();
    // normalize the minimum to 1 so shortest roots get (alpha, alpha) = 2
    let min = d.iter().min().cloned().unwrap();
    let d: Vec<i64> = d
        .iter()
        .map(|di| {
            let v = di / min.clone();
            // d_i are small positive integers once normalized for finite type
            if !v.is_integer() {
                // fall back: scale by the common denominator
                return Err(Error::Validation("non-integral symmetrizer".into()));
            }
            Ok(i64::try_from(v.to_integer()).map_err(|_| Error::Validation("symmetrizer overflow".into()))?)
        })
        .collect::<Result<_, Error>>()?;
    let gram: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| d[i] * matrix[i][j]).collect())
        .collect();
    // finite type <=> symmetrized matrix positive definite (leading minors > 0)
    for k in 1..=n {
        let mut sub: RMat = (0..k)
            .map(|i| (0..k).map(|j| BigRational::from_integer(gram[i][j].into())).collect())
            .collect();
        let det = rdet(&mut sub);
        if det <= BigRational::zero() {
            return Err(Error::Validation("Cartan matrix is not of finite type".into()));
        }
    }
    // close the simple roots under simple reflections to enumerate Delta+
    let mut pos: BTreeSet<Lattice> = BTreeSet::new();
    let mut queue: Vec<Lattice> = Vec::new();
    for i in 0..n {
        let mut v = vec![0i64; n];
        v[i] = 1;
        pos.insert(v.clone());
        queue.push(v);
    }
    while let Some(beta) = queue.pop() {
        for i in 0..n {
            // s_i(beta) = beta - <beta, alpha_i^vee> alpha_i
            let c: i64 = (0..n).map(|j| matrix[i][j] * beta[j]).sum();
            let mut img = beta.clone();
            img[i] -= c;
            if img.iter().all(|&x| x >= 0) && img.iter().any(|&x| x > 0) && pos.insert(img.clone())
            {
                queue.push(img);
            }
        }
    }
    let mut pos_roots: Vec<Lattice> = pos.iter().cloned().collect();
    pos_roots.sort_by_key(|r| (r.iter().sum::<i64>(), r.clone()));
    let mut root_set: BTreeSet<Lattice> = pos.clone();
    for r in &pos {
        root_set.insert(r.iter().map(|&x| -x).collect());
    }
    Ok(RootDatum {
        label,
        n,
        cartan: matrix,
        gram,
        pos_roots,
        root_set,
    })
}

fn rdet(m: &mut RMat) -> BigRational {
    let n = m.len();
    let mut det = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return BigRational::zero();
        };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        det *= m[c][c].clone();
        let inv = m[c][c].recip();
        for i in (c + 1)..n {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] * &inv;
            for j in c..n {
                let t = &m[c][j] * &f;
                m[i][j] = &m[i][j] - &t;
            }
        }
    }
    det
}

impl RootDatum {
    /// Height of a root-lattice vector: sum of simple-root coordinates.
    pub fn ht(gamma: &[i64]) -> i64 {
        gamma.iter().sum()
    }

    /// (alpha_i, alpha_i) as an s-exponent for q_i = s^{(alpha_i, alpha_i)}.
    pub fn d_s(&self, i: usize) -> u32 {
        self.gram[i][i] as u32
    }

    /// Inner product of two root-lattice vectors.
    pub fn pairing(&self, a: &[i64], b: &[i64]) -> i64 {
        let mut acc = 0i64;
        for i in 0..self.n {
            if a[i] == 0 {
                continue;
            }
            for j in 0..self.n {
                acc += a[i] * self.gram[i][j] * b[j];
            }
        }
        acc
    }

    /// (lambda, mu) for lambda in fundamental-weight coordinates and mu in
    /// root coordinates: (omega_i, alpha_j) = delta_ij (alpha_j, alpha_j)/2.
    pub fn weight_root_pairing(&self, lambda_fw: &[i64], mu: &[i64]) -> i64 {
        (0..self.n)
            .map(|j| lambda_fw[j] * mu[j] * (self.gram[j][j] / 2))
            .sum()
    }

    /// <lambda - eta, alpha_i^vee> for lambda in fw coordinates, eta in root
    /// coordinates.
    pub fn coroot_pairing_shifted(&self, lambda_fw: &[i64], eta: &[i64], i: usize) -> i64 {
        lambda_fw[i] - (0..self.n).map(|j| self.cartan[i][j] * eta[j]).sum::<i64>()
    }

    pub fn is_root(&self, v: &[i64]) -> bool {
        self.root_set.contains(v)
    }

    pub fn simple_root(&self, i: usize) -> Lattice {
        let mut v = vec![0i64; self.n];
        v[i] = 1;
        v
    }

    /// Reflection matrix of s_i acting on root coordinates (columns are the
    /// images of the simple roots).
    pub fn reflection_matrix(&self, i: usize) -> Vec<Vec<i64>> {
        let mut m = vec![vec![0i64; self.n]; self.n];
        for j in 0..self.n {
            m[j][j] = 1;
            m[i][j] -= self.cartan[i][j];
        }
        m
    }

    /// Longest element of the parabolic Weyl group generated by the simple
    /// reflections in `pi`, as a matrix on the root lattice.  Built greedily:
    /// extend by any s_i (i in pi) whose simple root is still sent to a
    /// positive root, until none remains positive.
    pub fn longest_element(&self, pi: &BTreeSet<usize>) -> Vec<Vec<i64>> {
        let mut w = identity(self.n);
        let bound = self.pos_roots.len() + 1;
        for _ in 0..bound {
            let mut progressed = false;
            for &i in pi {
                let img = mat_apply(&w, &self.simple_root(i));
                if img.iter().all(|&x| x >= 0) {
                    w = mat_mul(&w, &self.reflection_matrix(i));
                    progressed = true;
                    break;
                }
            }
            if !progressed {
                return w;
            }
        }
        unreachable!("parabolic longest-element search failed to terminate");
    }

    /// Root coordinates of lambda - w0(lambda) for dominant lambda given in
    /// fundamental-weight coordinates, where w0 is the longest Weyl element.
    /// Computed as a greedy descent to the antidominant chamber.
    pub fn dominant_drop(&self, lambda_fw: &[i64]) -> Lattice {
        let mut eta = vec![0i64; self.n];
        loop {
            let mut moved = false;
            for i in 0..self.n {
                let c = self.coroot_pairing_shifted(lambda_fw, &eta, i);
                if c > 0 {
                    eta[i] += c;
                    moved = true;
                }
            }
            if !moved {
                return eta;
            }
        }
    }

    /// Weyl dimension of the simple module with dominant highest weight
    /// lambda (fundamental-weight coordinates).
    pub fn weyl_dim(&self, lambda_fw: &[i64]) -> BigInt {
        let mut num = BigRational::one();
        for beta in &self.pos_roots {
            let top: i64 = (0..self.n)
                .map(|j| (lambda_fw[j] + 1) * beta[j] * (self.gram[j][j] / 2))
                .sum();
            let bot: i64 = (0..self.n)
                .map(|j| beta[j] * (self.gram[j][j] / 2))
                .sum();
            num *= BigRational::new(BigInt::from(top), BigInt::from(bot));
        }
        assert!(num.is_integer(), "Weyl dimension must be an integer");
        num.to_integer()
    }

    /// Number of ways to write mu (root coordinates) as an N-combination of
    /// positive roots.
    pub fn kostant_partitions(&self, mu: &[i64]) -> u64 {
        if mu.iter().any(|&x| x < 0) {
            return 0;
        }
        fn rec(
            datum: &RootDatum,
            idx: usize,
            rest: &Lattice,
            memo: &mut BTreeMap<(usize, Lattice), u64>,
        ) -> u64 {
            if rest.iter().all(|&x| x == 0) {
                return 1;
            }
            if idx == datum.pos_roots.len() {
                return 0;
            }
            let key = (idx, rest.clone());
            if let Some(&v) = memo.get(&key) {
                return v;
            }
            let mut total = rec(datum, idx + 1, rest, memo);
            let beta = datum.pos_roots[idx].clone();
            let mut cur = rest.clone();
            loop {
                let mut ok = true;
                for j in 0..datum.n {
                    cur[j] -= beta[j];
                    if cur[j] < 0 {
                        ok = false;
                    }
                }
                if !ok {
                    break;
                }
                total += rec(datum, idx + 1, &cur, memo);
            }
            memo.insert(key, total);
            total
        }
        let mut memo = BTreeMap::new();
        rec(self, 0, &mu.to_vec(), &mut memo)
    }
}

pub fn identity(n: usize) -> Vec<Vec<i64>> {
    let mut m = vec![vec![0i64; n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1;
    }
    m
}

pub fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    let mut out = vec![vec![0i64; n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k] == 0 {
                continue;
            }
            for j in 0..n {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

pub fn mat_apply(m: &[Vec<i64>], v: &[i64]) -> Lattice {
    let n = m.len();
    (0..n).map(|i| (0..n).map(|j| m[i][j] * v[j]).sum()).collect()
}

pub fn vec_add(a: &[i64], b: &[i64]) -> Lattice {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vec_sub(a: &[i64], b: &[i64]) -> Lattice {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vec_neg(a: &[i64]) -> Lattice {
    a.iter().map(|x| -x).collect()
}

// ---------------------------------------------------------------------------
// lattice involutions
// ---------------------------------------------------------------------------

/// An involutive lattice map on the root lattice (columns are images of the
/// simple roots), typically Theta = -w0' . d for a parabolic longest element
/// w0' and a diagram automorphism d.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeMap {
    pub m: Vec<Vec<i64>>,
}

impl LatticeMap {
    pub fn apply(&self, v: &[i64]) -> Lattice {
        mat_apply(&self.m, v)
    }

    pub fn fixes(&self, v: &[i64]) -> bool {
        self.apply(v) == v
    }
}

/// Requested diagram automorphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DiagramMap {
    Id,
    Flip,
    Explicit(Vec<usize>),
}

impl DiagramMap {
    /// Resolve to a permutation of {0..n-1}.
    pub fn to_permutation(&self, n: usize) -> Result<Vec<usize>, Error> {
        match self {
            DiagramMap::Id => Ok((0..n).collect()),
            DiagramMap::Flip => Ok((0..n).rev().collect()),
            DiagramMap::Explicit(p) => {
                if p.len() != n {
                    return Err(Error::Validation("diagram map has wrong length".into()));
                }
                let mut seen = vec![false; n];
                for &x in p {
                    if x >= n || seen[x] {
                        return Err(Error::Validation("diagram map is not a permutation".into()));
                    }
                    seen[x] = true;
                }
                Ok(p.clone())
            }
        }
    }
}

/// Build the involution Theta = -w0' . d on the root lattice, where w0' is
/// the longest element of the parabolic Weyl group of `pi_theta` and d is a
/// diagram automorphism extending -w0' on pi_theta.  Validates: d preserves
/// the Cartan matrix, Theta^2 = id, Theta permutes the roots, and Theta fixes
/// every simple root in pi_theta.
pub fn theta_lattice(
    datum: &RootDatum,
    pi_theta: &BTreeSet<usize>,
    d: &DiagramMap,
) -> Result<LatticeMap, Error> {
    let n = datum.n;
    for &i in pi_theta {
        if i >= n {
            return Err(Error::Validation(format!("pi_theta index {} out of range", i + 1)));
        }
    }
    let perm = d.to_permutation(n)?;
    for i in 0..n {
        for j in 0..n {
            if datum.cartan[perm[i]][perm[j]] != datum.cartan[i][j] {
                return Err(Error::Validation(
                    "diagram map does not preserve the Cartan matrix".into(),
                ));
            }
        }
    }
    let w0 = datum.longest_element(pi_theta);
    // Theta(alpha_j) = -w0(alpha_{d(j)})
    let mut m = vec![vec![0i64; n]; n];
    for j in 0..n {
        let img = mat_apply(&w0, &datum.simple_root(perm[j]));
        for i in 0..n {
            m[i][j] = -img[i];
        }
    }
    let theta = LatticeMap { m };
    let sq = mat_mul(&theta.m, &theta.m);
    if sq != identity(n) {
        return Err(Error::Validation("Theta is not an involution".into()));
    }
    for beta in &datum.pos_roots {
        if !datum.is_root(&theta.apply(beta)) {
            return Err(Error::Validation("Theta does not permute the roots".into()));
        }
    }
    for &i in pi_theta {
        if !theta.fixes(&datum.simple_root(i)) {
            return Err(Error::Validation(format!(
                "Theta does not fix alpha_{} in pi_theta",
                i + 1
            )));
        }
    }
    Ok(theta)
}

/// Simple roots fixed by Theta.
pub fn fixed_simples(datum: &RootDatum, theta: &LatticeMap) -> BTreeSet<usize> {
    (0..datum.n)
        .filter(|&i| theta.fixes(&datum.simple_root(i)))
        .collect()
}

/// The pairing permutation p on the non-fixed simple roots: p(i) is the
/// unique non-fixed index with Theta(-alpha_i) - alpha_{p(i)} supported on
/// the fixed simples with nonnegative coordinates.
pub fn theta_permutation(datum: &RootDatum, theta: &LatticeMap) -> Result<Vec<usize>, Error> {
    let n = datum.n;
    let pi_theta = fixed_simples(datum, theta);
    let mut p: Vec<usize> = (0..n).collect();
    for i in 0..n {
        if pi_theta.contains(&i) {
            continue;
        }
        let target = vec_neg(&theta.apply(&datum.simple_root(i)));
        let mut found = None;
        for j in 0..n {
            if pi_theta.contains(&j) {
                continue;
            }
            let mut diff = target.clone();
            diff[j] -= 1;
            let ok = diff
                .iter()
                .enumerate()
                .all(|(k, &c)| c == 0 || (c > 0 && pi_theta.contains(&k)));
            if ok {
                if found.is_some() {
                    return Err(Error::Validation(format!(
                        "pairing index for alpha_{} is not unique",
                        i + 1
                    )));
                }
                found = Some(j);
            }
        }
        p[i] = found.ok_or_else(|| {
            Error::Validation(format!("no pairing index for alpha_{}", i + 1))
        })?;
    }
    // p must be an involution on the non-fixed indices
    for i in 0..n {
        if !pi_theta.contains(&i) && p[p[i]] != i {
            return Err(Error::Validation("pairing map is not an involution".into()));
        }
    }
    Ok(p)
}

// ---------------------------------------------------------------------------
// restricted root system
// ---------------------------------------------------------------------------

/// One restricted root: the projection (beta - Theta beta)/2 of a root beta,
/// in ambient root-lattice coordinates (rational) and in coordinates of the
/// chosen integer basis of the (-1)-eigenlattice.
#[derive(Debug, Clone, PartialEq)]
pub struct RestrictedRoot {
    pub ambient: Vec<BigRational>,
    pub coords: Vec<BigRational>,
}

/// A connected component of the restricted root system with its type label.
#[derive(Debug, Clone, PartialEq)]
pub struct RestrictedComponent {
    /// indices into `simples` of the parent system
    pub simple_indices: Vec<usize>,
    pub label: String,
    pub nonreduced: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RestrictedSystem {
    /// Integer basis of the (-1)-eigenlattice of Theta.
    pub eigenbasis: Vec<Lattice>,
    /// Distinct nonzero restrictions of all roots.
    pub roots: Vec<RestrictedRoot>,
    /// Distinct nonzero restrictions of the simple roots (the simple system).
    pub simples: Vec<RestrictedRoot>,
    pub components: Vec<RestrictedComponent>,
    /// Index pairs {r, p(r)} (0-based) with p(r) != r and
    /// (alpha_r, Theta alpha_r) != 0: exactly the places where a one-parameter
    /// family of coideal subalgebras exists.
    pub variation_pairs: Vec<(usize, usize)>,
}

fn pairing_rational(datum: &RootDatum, a: &[BigRational], b: &[BigRational]) -> BigRational {
    let mut acc = BigRational::zero();
    for i in 0..datum.n {
        if a[i].is_zero() {
            continue;
        }
        for j in 0..datum.n {
            acc += &a[i] * BigRational::from_integer(datum.gram[i][j].into()) * &b[j];
        }
    }
    acc
}

/// Restrict the root system to the (-1)-eigenspace of Theta and classify the
/// result.
pub fn restricted_roots(datum: &RootDatum, theta: &LatticeMap) -> Result<RestrictedSystem, Error> {
    let n = datum.n;
    // eigenbasis: integer kernel of (Theta + id)
    let mut theta_plus = theta.m.clone();
    for (i, row) in theta_plus.iter_mut().enumerate() {
        row[i] += 1;
    }
    let eigenbasis = integer_kernel(&theta_plus);
    let half = BigRational::new(BigInt::one(), BigInt::from(2));

    let restrict = |beta: &Lattice| -> Vec<BigRational> {
        let img = theta.apply(beta);
        (0..n)
            .map(|i| BigRational::from_integer((beta[i] - img[i]).into()) * &half)
            .collect()
    };
    // coordinates in the eigenbasis
    let basis_mat: RMat = (0..n)
        .map(|i| {
            eigenbasis
                .iter()
                .map(|b| BigRational::from_integer(b[i].into()))
                .collect()
        })
        .collect();
    let coords_of = |ambient: &[BigRational]| -> Result<Vec<BigRational>, Error> {
        if eigenbasis.is_empty() {
            return Ok(Vec::new());
        }
        rmat_solve(&basis_mat, ambient).ok_or_else(|| {
            Error::Internal("restriction does not lie in the (-1)-eigenspace".into())
        })
    };

    let mut seen: Vec<Vec<BigRational>> = Vec::new();
    let mut roots = Vec::new();
    let all_roots: Vec<Lattice> = datum
        .pos_roots
        .iter()
        .cloned()
        .chain(datum.pos_roots.iter().map(|r| vec_neg(r)))
        .collect();
    for beta in &all_roots {
        let amb = restrict(beta);
        if amb.iter().all(|x| x.is_zero()) {
            continue;
        }
        if seen.contains(&amb) {
            continue;
        }
        seen.push(amb.clone());
        let coords = coords_of(&amb)?;
        roots.push(RestrictedRoot { ambient: amb, coords });
    }

    // simple system: nonzero restrictions of the simple roots
    let mut simples: Vec<RestrictedRoot> = Vec::new();
    for i in 0..n {
        let amb = restrict(&datum.simple_root(i));
        if amb.iter().all(|x| x.is_zero()) {
            continue;
        }
        if simples.iter().any(|s| s.ambient == amb) {
            continue;
        }
        let coords = coords_of(&amb)?;
        simples.push(RestrictedRoot { ambient: amb, coords });
    }

    // connected components of the simple system
    let k = simples.len();
    let mut component_of: Vec<Option<usize>> = vec![None; k];
    let mut components: Vec<Vec<usize>> = Vec::new();
    for start in 0..k {
        if component_of[start].is_some() {
            continue;
        }
        let id = components.len();
        let mut comp = vec![start];
        component_of[start] = Some(id);
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            for j in 0..k {
                if component_of[j].is_none()
                    && !pairing_rational(datum, &simples[i].ambient, &simples[j].ambient).is_zero()
                {
                    component_of[j] = Some(id);
                    comp.push(j);
                    stack.push(j);
                }
            }
        }
        comp.sort_unstable();
        components.push(comp);
    }

    let is_restricted_root = |v: &[BigRational]| -> bool {
        roots.iter().any(|r| r.ambient == v)
    };
    let double = |v: &[BigRational]| -> Vec<BigRational> {
        v.iter().map(|x| x * BigRational::from_integer(2.into())).collect()
    };

    let mut comps = Vec::new();
    for comp in components {
        let nonreduced = comp
            .iter()
            .any(|&i| is_restricted_root(&double(&simples[i].ambient)));
        let label = classify_component(datum, &simples, &comp, nonreduced)?;
        comps.push(RestrictedComponent {
            simple_indices: comp,
            label,
            nonreduced,
        });
    }

    // variation pairs
    let mut variation_pairs = Vec::new();
    if let Ok(p) = theta_permutation(datum, theta) {
        let pi_theta = fixed_simples(datum, theta);
        for r in 0..n {
            if pi_theta.contains(&r) || p[r] <= r {
                continue;
            }
            let pairing = datum.pairing(&datum.simple_root(r), &theta.apply(&datum.simple_root(r)));
            if pairing != 0 {
                variation_pairs.push((r, p[r]));
            }
        }
    }

    Ok(RestrictedSystem {
        eigenbasis,
        roots,
        simples,
        components: comps,
        variation_pairs,
    })
}

fn classify_component(
    datum: &RootDatum,
    simples: &[RestrictedRoot],
    comp: &[usize],
    nonreduced: bool,
) -> Result<String, Error> {
    let rank = comp.len();
    if nonreduced {
        return Ok(format!("BC{rank}"));
    }
    let norm =
        |i: usize| -> BigRational { pairing_rational(datum, &simples[i].ambient, &simples[i].ambient) };
    let cart = |i: usize, j: usize| -> BigRational {
        let two = BigRational::from_integer(2.into());
        two * pairing_rational(datum, &simples[i].ambient, &simples[j].ambient) / norm(j)
    };
    match rank {
        1 => Ok("A1".into()),
        2 => {
            let prod = cart(comp[0], comp[1]) * cart(comp[1], comp[0]);
            let p = prod.to_integer();
            match i64::try_from(&p).unwrap_or(99) {
                1 => Ok("A2".into()),
                2 => Ok("B2".into()),
                3 => Ok("G2".into()),
                other => Err(Error::Internal(format!(
                    "unexpected rank-2 bond multiplicity {other}"
                ))),
            }
        }
        3 => {
            // count bonds with multiplicity 2 along the chain
            let mut doubles = 0;
            let mut shorts = 0;
            let norms: Vec<BigRational> = comp.iter().map(|&i| norm(i)).collect();
            let min = norms.iter().min().cloned().unwrap();
            for &i in comp {
                if norm(i) == min {
                    shorts += 1;
                }
            }
            for a in 0..3 {
                for b in (a + 1)..3 {
                    let prod = cart(comp[a], comp[b]) * cart(comp[b], comp[a]);
                    if prod == BigRational::from_integer(2.into()) {
                        doubles += 1;
                    }
                }
            }
            if doubles == 0 {
                Ok("A3".into())
            } else if shorts == 1 {
                Ok("B3".into())
            } else {
                Ok("C3".into())
            }
        }
        r => Ok(format!("rank{r}")),
    }
}

// ---------------------------------------------------------------------------
// weight tests
// ---------------------------------------------------------------------------

/// Test whether a dominant weight (fundamental-weight coordinates) is
/// spherical for the involution: (i) it kills every Theta-fixed root-lattice
/// vector, and (ii) its restriction pairs integrally with every restricted
/// root.
pub fn spherical_weight_test(
    datum: &RootDatum,
    theta: &LatticeMap,
    lambda_fw: &[i64],
) -> Result<bool, Error> {
    if lambda_fw.len() != datum.n {
        return Err(Error::Argument("weight has wrong rank".into()));
    }
    if lambda_fw.iter().any(|&m| m < 0) {
        return Err(Error::Argument("weight must be dominant".into()));
    }
    // (i): fixed lattice of Theta
    let mut theta_minus = theta.m.clone();
    for (i, row) in theta_minus.iter_mut().enumerate() {
        row[i] -= 1;
    }
    for b in integer_kernel(&theta_minus) {
        if datum.weight_root_pairing(lambda_fw, &b) != 0 {
            return Ok(false);
        }
    }
    // (ii): lambda~ = (lambda - Theta lambda)/2; (lambda~, beta)/(beta, beta) in Z
    // for every restricted root beta.  With beta = (g - Theta g)/2 for a root g
    // and Theta orthogonal, (lambda~, beta) = (lambda, g - Theta g)/2.
    let sys = restricted_roots(datum, theta)?;
    let weight_pair = |v: &[BigRational]| -> BigRational {
        let mut acc = BigRational::zero();
        for j in 0..datum.n {
            acc += BigRational::from_integer((lambda_fw[j] * (datum.gram[j][j] / 2)).into()) * &v[j];
        }
        acc
    };
    for beta in &sys.roots {
        // beta.ambient is a (-1)-eigenvector and the eigenspaces of the
        // orthogonal involution are perpendicular, so the projection of
        // lambda pairs with it exactly as lambda does.
        let num = weight_pair(&beta.ambient);
        let den = pairing_rational(datum, &beta.ambient, &beta.ambient);
        if !(num / den).is_integer() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Test whether tau(lambda) lies in the locally finite part of the algebra
/// under the adjoint action: every (lambda, alpha_i)/(alpha_i, alpha_i) must
/// be a nonpositive integer.
pub fn flocal_torus_test(datum: &RootDatum, lambda: &[i64]) -> Result<bool, Error> {
    if lambda.len() != datum.n {
        return Err(Error::Argument("lattice vector has wrong rank".into()));
    }
    for i in 0..datum.n {
        let num = datum.pairing(lambda, &datum.simple_root(i));
        let den = datum.gram[i][i];
        if num > 0 || num % den != 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn datum(lbl: &str) -> RootDatum {
        cartan_init(&CartanSpec::Series(lbl.into())).unwrap()
    }

    #[test]
    fn positive_root_counts() {
        assert_eq!(datum("A1").pos_roots.len(), 1);
        assert_eq!(datum("A1xA1").pos_roots.len(), 2);
        assert_eq!(datum("A2").pos_roots.len(), 3);
        assert_eq!(datum("A3").pos_roots.len(), 6);
        assert_eq!(datum("B2").pos_roots.len(), 4);
        assert_eq!(datum("G2").pos_roots.len(), 6);
    }

    #[test]
    fn b2_and_g2_lengths() {
        let b2 = datum("B2");
        assert_eq!(b2.gram[0][0], 4); // long
        assert_eq!(b2.gram[1][1], 2); // short
        assert_eq!(b2.gram[0][1], -2);
        let g2 = datum("G2");
        assert_eq!(g2.gram[0][0], 2);
        assert_eq!(g2.gram[1][1], 6);
        assert_eq!(g2.gram[0][1], -3);
    }

    #[test]
    fn invalid_cartan_rejected() {
        assert!(matches!(
            cartan_init(&CartanSpec::Matrix(vec![vec![2, -1], vec![-5, 2]])),
            Err(Error::Validation(_))
        )); // affine/indefinite
        assert!(matches!(
            cartan_init(&CartanSpec::Matrix(vec![vec![2, 1], vec![1, 2]])),
            Err(Error::Validation(_))
        ));
        assert!(matches!(
            cartan_init(&CartanSpec::Matrix(vec![vec![2, -2], vec![-2, 2]])),
            Err(Error::Validation(_))
        )); // affine A1~
    }

    #[test]
    fn ht_and_pairings() {
        let a2 = datum("A2");
        assert_eq!(RootDatum::ht(&[1, 1]), 2);
        assert_eq!(a2.pairing(&[1, 0], &[0, 1]), -1);
        assert_eq!(a2.pairing(&[1, 1], &[1, 1]), 2);
        // (omega_1, alpha_1) = 1, (omega_1, alpha_2) = 0
        assert_eq!(a2.weight_root_pairing(&[1, 0], &[1, 0]), 1);
        assert_eq!(a2.weight_root_pairing(&[1, 0], &[0, 1]), 0);
    }

    #[test]
    fn kostant_counts_a2() {
        let a2 = datum("A2");
        // mu = alpha1 + alpha2: two ways (alpha1 + alpha2, or the sum root)
        assert_eq!(a2.kostant_partitions(&[1, 1]), 2);
        // mu = 2alpha1 + 2alpha2: three ways
        assert_eq!(a2.kostant_partitions(&[2, 2]), 3);
        assert_eq!(a2.kostant_partitions(&[1, 0]), 1);
        assert_eq!(a2.kostant_partitions(&[-1, 0]), 0);
    }

    #[test]
    fn kostant_counts_b2() {
        let b2 = datum("B2");
        // mu = alpha1 + 2 alpha2 = (1,2): combinations: a1+2a2, (a1+a2)+a2,
        // (a1+2a2) => 3
        assert_eq!(b2.kostant_partitions(&[1, 2]), 3);
        assert_eq!(b2.kostant_partitions(&[1, 1]), 2);
    }

    #[test]
    fn longest_element_full_a2() {
        let a2 = datum("A2");
        let pi: BTreeSet<usize> = [0usize, 1].into_iter().collect();
        let w0 = a2.longest_element(&pi);
        // w0 sends alpha1 -> -alpha2, alpha2 -> -alpha1
        assert_eq!(mat_apply(&w0, &[1, 0]), vec![0, -1]);
        assert_eq!(mat_apply(&w0, &[0, 1]), vec![-1, 0]);
    }

    #[test]
    fn theta_split_and_flip() {
        let a2 = datum("A2");
        let none: BTreeSet<usize> = BTreeSet::new();
        let split = theta_lattice(&a2, &none, &DiagramMap::Id).unwrap();
        assert_eq!(split.apply(&[1, 0]), vec![-1, 0]);
        assert_eq!(split.apply(&[0, 1]), vec![0, -1]);
        let flip = theta_lattice(&a2, &none, &DiagramMap::Flip).unwrap();
        assert_eq!(flip.apply(&[1, 0]), vec![0, -1]);
    }

    #[test]
    fn theta_parabolic_a2() {
        let a2 = datum("A2");
        let pi: BTreeSet<usize> = [0usize].into_iter().collect();
        let th = theta_lattice(&a2, &pi, &DiagramMap::Id).unwrap();
        assert_eq!(th.apply(&[1, 0]), vec![1, 0]);
        assert_eq!(th.apply(&[0, 1]), vec![-1, -1]);
        let p = theta_permutation(&a2, &th).unwrap();
        assert_eq!(p[1], 1);
    }

    #[test]
    fn theta_rejects_bad_diagram_map() {
        let b2 = datum("B2");
        let none: BTreeSet<usize> = BTreeSet::new();
        assert!(matches!(
            theta_lattice(&b2, &none, &DiagramMap::Flip),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn restricted_split_a2_is_a2() {
        let a2 = datum("A2");
        let none: BTreeSet<usize> = BTreeSet::new();
        let th = theta_lattice(&a2, &none, &DiagramMap::Id).unwrap();
        let sys = restricted_roots(&a2, &th).unwrap();
        assert_eq!(sys.roots.len(), 6);
        assert_eq!(sys.components.len(), 1);
        assert_eq!(sys.components[0].label, "A2");
        assert!(!sys.components[0].nonreduced);
        assert!(sys.variation_pairs.is_empty());
    }

    #[test]
    fn restricted_flip_a2_is_bc1() {
        let a2 = datum("A2");
        let none: BTreeSet<usize> = BTreeSet::new();
        let th = theta_lattice(&a2, &none, &DiagramMap::Flip).unwrap();
        let sys = restricted_roots(&a2, &th).unwrap();
        assert_eq!(sys.components.len(), 1);
        assert_eq!(sys.components[0].label, "BC1");
        assert!(sys.components[0].nonreduced);
        assert_eq!(sys.variation_pairs, vec![(0, 1)]);
    }

    #[test]
    fn restricted_a1_split() {
        let a1 = datum("A1");
        let none: BTreeSet<usize> = BTreeSet::new();
        let th = theta_lattice(&a1, &none, &DiagramMap::Id).unwrap();
        let sys = restricted_roots(&a1, &th).unwrap();
        assert_eq!(sys.components.len(), 1);
        assert_eq!(sys.components[0].label, "A1");
    }

    #[test]
    fn restricted_parabolic_a2_is_reduced_rank_one() {
        // pi_theta = {alpha_1}: alpha_2 and alpha_1+alpha_2 restrict to the
        // same ray and nothing restricts to its double, so the system is a
        // reduced A1 and alpha_2 is self-paired (no Variation-1 pair).
        let a2 = datum("A2");
        let pi: BTreeSet<usize> = [0usize].into_iter().collect();
        let th = theta_lattice(&a2, &pi, &DiagramMap::Id).unwrap();
        let sys = restricted_roots(&a2, &th).unwrap();
        assert_eq!(sys.components.len(), 1);
        assert_eq!(sys.components[0].label, "A1");
        assert!(!sys.components[0].nonreduced);
        assert!(sys.variation_pairs.is_empty());
    }

    #[test]
    fn spherical_weights_split() {
        let a1 = datum("A1");
        let none: BTreeSet<usize> = BTreeSet::new();
        let th = theta_lattice(&a1, &none, &DiagramMap::Id).unwrap();
        for m in 0..9i64 {
            let ok = spherical_weight_test(&a1, &th, &[m]).unwrap();
            assert_eq!(ok, m % 2 == 0, "m = {m}");
        }
        let a2 = datum("A2");
        let th2 = theta_lattice(&a2, &none, &DiagramMap::Id).unwrap();
        assert!(spherical_weight_test(&a2, &th2, &[2, 0]).unwrap());
        assert!(!spherical_weight_test(&a2, &th2, &[1, 1]).unwrap());
        assert!(spherical_weight_test(&a2, &th2, &[2, 2]).unwrap());
    }

    #[test]
    fn flocal_examples() {
        let a1 = datum("A1");
        for k in -4..=4i64 {
            let ok = flocal_torus_test(&a1, &[k]).unwrap();
            assert_eq!(ok, k <= 0, "k = {k}");
        }
        let a2 = datum("A2");
        assert!(!flocal_torus_test(&a2, &[-1, 0]).unwrap());
        // -alpha_1-alpha_2 fails integrality: (lambda,alpha_1)/(alpha_1,alpha_1) = -1/2
        assert!(!flocal_torus_test(&a2, &[-1, -1]).unwrap());
        assert!(flocal_torus_test(&a2, &[-2, -2]).unwrap());
    }

    #[test]
    fn dominant_drop_and_weyl_dim() {
        let a1 = datum("A1");
        assert_eq!(a1.dominant_drop(&[2]), vec![2]);
        assert_eq!(a1.weyl_dim(&[2]), BigInt::from(3));
        let a2 = datum("A2");
        assert_eq!(a2.dominant_drop(&[1, 1]), vec![2, 2]);
        assert_eq!(a2.weyl_dim(&[1, 1]), BigInt::from(8));
        assert_eq!(a2.weyl_dim(&[2, 2]), BigInt::from(27));
        let b2 = datum("B2");
        assert_eq!(b2.weyl_dim(&[1, 0]), BigInt::from(5));
        assert_eq!(b2.weyl_dim(&[0, 1]), BigInt::from(4));
    }
}

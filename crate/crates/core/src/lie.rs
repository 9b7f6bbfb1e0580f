//! Type A Lie theory: Weyl group as permutations, factorization charts, generalized
//! minors, Gaussian decomposition, derivative actions, braid moves and weights.

use std::collections::{BTreeMap, HashMap, VecDeque};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::{q, LaurentPolynomial, Q};
use crate::rational::{PositiveRational, RationalFunction};
use crate::ring::{Dual, Mat, Ring};

pub type SymbolicMatrix = Mat<LaurentPolynomial>;
pub type RatMatrix = Mat<Q>;

/// Permutation of {0..n-1}; `img[i]` is the image of i.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    pub img: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation { img: (0..n).collect() }
    }

    pub fn new(img: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; img.len()];
        for &x in &img {
            if x >= img.len() || seen[x] {
                return Err(Error::Invalid(format!("{img:?} is not a permutation")));
            }
            seen[x] = true;
        }
        Ok(Permutation { img })
    }

    /// Parse one-line notation with 1-based images, e.g. `3,1,2`.
    pub fn parse(s: &str) -> Result<Self> {
        let img = s
            .split(',')
            .map(|t| t.trim().parse::<usize>().map(|x| x.wrapping_sub(1)))
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::Parse(format!("bad permutation `{s}`")))?;
        Self::new(img)
    }

    pub fn n(&self) -> usize {
        self.img.len()
    }

    pub fn longest(n: usize) -> Self {
        Permutation { img: (0..n).rev().collect() }
    }

    /// Simple transposition s_i (1-based i) swapping i-1 and i.
    pub fn simple(n: usize, i: usize) -> Self {
        let mut p = Self::identity(n);
        p.img.swap(i - 1, i);
        p
    }

    /// (self ∘ o)(x) = self(o(x)).
    pub fn compose(&self, o: &Self) -> Self {
        Permutation { img: o.img.iter().map(|&x| self.img[x]).collect() }
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.n()];
        for (i, &x) in self.img.iter().enumerate() {
            inv[x] = i;
        }
        Permutation { img: inv }
    }

    pub fn length(&self) -> usize {
        let n = self.n();
        let mut l = 0;
        for i in 0..n {
            for j in i + 1..n {
                if self.img[i] > self.img[j] {
                    l += 1;
                }
            }
        }
        l
    }

    /// s_{i_1} ⋯ s_{i_m} for positive letters.
    pub fn from_word(n: usize, word: &[usize]) -> Self {
        word.iter().fold(Self::identity(n), |acc, &i| acc.compose(&Self::simple(n, i)))
    }

    /// Sorted image of {0..k-1}: the index set of the weight wω_k.
    pub fn apply_set(&self, k: usize) -> Vec<usize> {
        let mut s: Vec<usize> = self.img[..k].to_vec();
        s.sort_unstable();
        s
    }

    /// One reduced word (right descents peeled greedily).
    pub fn reduced_word(&self) -> Vec<usize> {
        let mut w = self.clone();
        let mut out = Vec::new();
        while let Some(i) = (1..w.n()).find(|&i| w.img[i - 1] > w.img[i]) {
            out.push(i);
            w = w.compose(&Self::simple(w.n(), i));
        }
        out.reverse();
        out
    }

    /// Every reduced word of this element.
    pub fn reduced_words(&self) -> Vec<Vec<usize>> {
        let mut memo: HashMap<Permutation, Vec<Vec<usize>>> = HashMap::new();
        fn go(w: &Permutation, memo: &mut HashMap<Permutation, Vec<Vec<usize>>>) -> Vec<Vec<usize>> {
            if let Some(v) = memo.get(w) {
                return v.clone();
            }
            let n = w.n();
            let mut out = Vec::new();
            if w.length() == 0 {
                out.push(vec![]);
            }
            for i in 1..n {
                if w.img[i - 1] > w.img[i] {
                    let ws = w.compose(&Permutation::simple(n, i));
                    for mut p in go(&ws, memo) {
                        p.push(i);
                        out.push(p);
                    }
                }
            }
            out.sort();
            memo.insert(w.clone(), out.clone());
            out
        }
        go(self, &mut memo)
    }
}

/// Parse a comma-separated signed word like `1,2,-1`.
pub fn parse_word(s: &str) -> Result<Vec<i32>> {
    s.split(',')
        .map(|t| t.trim().parse::<i32>().map_err(|_| Error::Parse(format!("bad word `{s}`"))))
        .collect()
}

pub fn rank(n: usize) -> usize {
    n - 1
}

pub fn longest_length(n: usize) -> usize {
    n * (n - 1) / 2
}

/// Both the positive and negative letters must form reduced words.
pub fn check_double_reduced(n: usize, word: &[i32]) -> Result<()> {
    let bad = || Error::NotReduced(word.to_vec());
    if word.iter().any(|&x| x == 0 || x.unsigned_abs() as usize >= n) {
        return Err(bad());
    }
    for sign in [1, -1] {
        let part: Vec<usize> = word.iter().filter(|&&x| x.signum() == sign).map(|&x| x.unsigned_abs() as usize).collect();
        if Permutation::from_word(n, &part).length() != part.len() {
            return Err(bad());
        }
    }
    Ok(())
}

pub fn check_w0_word(n: usize, word: &[i32]) -> Result<Vec<usize>> {
    let bad = || Error::NotReducedForW0(word.to_vec());
    if word.iter().any(|&x| x <= 0 || x as usize >= n) {
        return Err(bad());
    }
    let w: Vec<usize> = word.iter().map(|&x| x as usize).collect();
    if w.len() != longest_length(n) || Permutation::from_word(n, &w) != Permutation::longest(n) {
        return Err(bad());
    }
    Ok(w)
}

fn elementary(n: usize, nv: usize, letter: i32, param: &LaurentPolynomial) -> SymbolicMatrix {
    let mut m = Mat::identity(n, &LaurentPolynomial::zero(nv));
    let i = letter.unsigned_abs() as usize - 1;
    if letter > 0 {
        m.set(i, i + 1, param.clone());
    } else {
        m.set(i + 1, i, param.clone());
    }
    m
}

/// e_{i_1}(t_{a_1}) ⋯ e_{i_m}(t_{a_m}) · h_1(t_{b_1}) ⋯ h_r(t_{b_r}) inside a ring
/// of `nv` variables; `t_idx` and `h_idx` name the variables used.
pub fn theta_in(n: usize, word: &[i32], nv: usize, t_idx: &[usize], h_idx: Option<&[usize]>) -> SymbolicMatrix {
    assert_eq!(word.len(), t_idx.len());
    let mut m = Mat::identity(n, &LaurentPolynomial::zero(nv));
    for (&l, &v) in word.iter().zip(t_idx) {
        m = m.mul(&elementary(n, nv, l, &LaurentPolynomial::var(nv, v)));
    }
    if let Some(h) = h_idx {
        assert_eq!(h.len(), n - 1);
        // the product of the h_i is diagonal: entry j gets h_j / h_{j-1}
        let mut d = Mat::identity(n, &LaurentPolynomial::zero(nv));
        for j in 0..n {
            let mut e = vec![0; nv];
            if j < n - 1 {
                e[h[j]] += 1;
            }
            if j > 0 {
                e[h[j - 1]] -= 1;
            }
            d.set(j, j, LaurentPolynomial::monomial(e, Q::one()));
        }
        m = m.mul(&d);
    }
    m
}

/// Chart matrix in parameters t_1..t_m (then h_1..h_r when `include_torus`).
pub fn theta_chart(n: usize, word: &[i32], include_torus: bool) -> Result<SymbolicMatrix> {
    check_double_reduced(n, word)?;
    let m = word.len();
    let r = n - 1;
    let nv = if include_torus { m + r } else { m };
    let t: Vec<usize> = (0..m).collect();
    let h: Vec<usize> = (m..m + r).collect();
    Ok(theta_in(n, word, nv, &t, if include_torus { Some(&h) } else { None }))
}

/// Rows/columns designator of a minor, 0-based and sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MinorSet {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

impl MinorSet {
    pub fn new(mut rows: Vec<usize>, mut cols: Vec<usize>) -> Self {
        rows.sort_unstable();
        cols.sort_unstable();
        assert_eq!(rows.len(), cols.len());
        MinorSet { rows, cols }
    }

    pub fn k(&self) -> usize {
        self.rows.len()
    }

    pub fn is_principal(&self) -> bool {
        self.rows == self.cols && self.rows.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// `Δ_{12,23}` style label, 1-based.
    pub fn label(&self) -> String {
        let f = |v: &[usize]| v.iter().map(|x| (x + 1).to_string()).collect::<String>();
        format!("Δ_{{{},{}}}", f(&self.rows), f(&self.cols))
    }

    /// Parse `12,23`.
    pub fn parse(s: &str) -> Result<Self> {
        let (r, c) = s.split_once(',').ok_or_else(|| Error::Parse(format!("bad minor `{s}`")))?;
        let digits = |t: &str| -> Result<Vec<usize>> {
            t.trim()
                .chars()
                .map(|ch| ch.to_digit(10).filter(|&d| d > 0).map(|d| d as usize - 1).ok_or_else(|| Error::Parse(format!("bad minor `{s}`"))))
                .collect()
        };
        let (r, c) = (digits(r)?, digits(c)?);
        if r.len() != c.len() || r.is_empty() {
            return Err(Error::Parse(format!("bad minor `{s}`")));
        }
        Ok(Self::new(r, c))
    }

    pub fn eval<R: Ring>(&self, m: &Mat<R>) -> R {
        m.minor(&self.rows, &self.cols)
    }
}

/// Δ_{uω_k, vω_k}.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MinorSpec {
    pub u: Permutation,
    pub v: Permutation,
    pub k: usize,
}

impl MinorSpec {
    pub fn new(u: Permutation, v: Permutation, k: usize) -> Result<Self> {
        let n = u.n();
        if v.n() != n || k == 0 || k >= n {
            return Err(Error::Invalid(format!("invalid minor spec k={k} for n={n}")));
        }
        Ok(MinorSpec { u, v, k })
    }

    pub fn set(&self) -> MinorSet {
        MinorSet::new(self.u.apply_set(self.k), self.v.apply_set(self.k))
    }
}

pub fn generalized_minor<R: Ring>(spec: &MinorSpec, m: &Mat<R>) -> R {
    spec.set().eval(m)
}

/// Exact LDU: M = L·D·U with unipotent L (lower), U (upper).
pub fn gaussian_decompose(m: &RatMatrix) -> Result<(RatMatrix, RatMatrix, RatMatrix)> {
    let n = m.n;
    let mut l = Mat::identity(n, &Q::zero());
    let mut u = m.clone();
    for k in 0..n {
        let p = u.get(k, k).clone();
        if p.is_zero() {
            return Err(Error::NotDecomposable(k + 1));
        }
        for i in k + 1..n {
            let f = u.get(i, k) / &p;
            if f.is_zero() {
                continue;
            }
            l.set(i, k, f.clone());
            for j in k..n {
                let v = u.get(i, j) - &f * u.get(k, j);
                u.set(i, j, v);
            }
        }
    }
    let d = Mat::from_fn(n, |i, j| if i == j { u.get(i, i).clone() } else { Q::zero() });
    let uu = Mat::from_fn(n, |i, j| if j >= i { u.get(i, j) / u.get(i, i) } else { Q::zero() });
    Ok((l, d, uu))
}

/// s̄_i = φ_i([[0,−1],[1,0]]), and its inverse.
fn sbar(n: usize, i: usize, inverse: bool) -> RatMatrix {
    let mut m = Mat::identity(n, &Q::zero());
    let (a, b) = (i - 1, i);
    let s = if inverse { -Q::one() } else { Q::one() };
    m.set(a, a, Q::zero());
    m.set(b, b, Q::zero());
    m.set(a, b, -s.clone());
    m.set(b, a, s);
    m
}

pub fn lift(w: &Permutation) -> RatMatrix {
    let n = w.n();
    w.reduced_word().iter().fold(Mat::identity(n, &Q::zero()), |acc, &i| acc.mul(&sbar(n, i, false)))
}

/// Δ_{uω_k,vω_k}(M) = [ū⁻¹ M v̄]_0^{ω_k}, through an exact Gaussian decomposition.
pub fn minor_via_gauss(spec: &MinorSpec, m: &RatMatrix) -> Result<Q> {
    let n = m.n;
    let uinv = spec.u.reduced_word().iter().rev().fold(Mat::identity(n, &Q::zero()), |acc, &i| acc.mul(&sbar(n, i, true)));
    let x = uinv.mul(m).mul(&lift(&spec.v));
    let (_, d, _) = gaussian_decompose(&x)?;
    Ok((0..spec.k).fold(Q::one(), |acc, i| acc * d.get(i, i)))
}

/// Elementary matrix E_{ij} (0-based).
pub fn elem(n: usize, i: usize, j: usize) -> RatMatrix {
    Mat::from_fn(n, |a, b| if a == i && b == j { Q::one() } else { Q::zero() })
}

/// Simple coroot H_i = E_ii − E_{i+1,i+1} (1-based i).
pub fn coroot(n: usize, i: usize) -> RatMatrix {
    Mat::from_fn(n, |a, b| {
        if a != b {
            Q::zero()
        } else if a == i - 1 {
            Q::one()
        } else if a == i {
            -Q::one()
        } else {
            Q::zero()
        }
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

fn const_matrix(x: &RatMatrix, nv: usize) -> SymbolicMatrix {
    x.map(|c| LaurentPolynomial::constant(nv, c.clone()))
}

/// d/dε Δ((I+εX)M) or d/dε Δ(M(I+εX)), via dual-number entries.
pub fn derivative_action(side: Side, x: &RatMatrix, minor: &MinorSet, m: &SymbolicMatrix) -> LaurentPolynomial {
    let nv = m.a[0].nvars();
    let xs = const_matrix(x, nv);
    let dm = match side {
        Side::Left => xs.mul(m),
        Side::Right => m.mul(&xs),
    };
    let dual = Mat { n: m.n, a: m.a.iter().zip(&dm.a).map(|(a, b)| Dual::new(a.clone(), b.clone())).collect() };
    minor.eval(&dual).eps
}

/// (X_1·(X_2·(⋯ X_k·Δ)))(M) for the left action, as the coefficient of q_1⋯q_k
/// in Δ((I+q_kX_k)⋯(I+q_1X_1)M).
pub fn iterated_left_derivative(xs: &[RatMatrix], minor: &MinorSet, m: &SymbolicMatrix) -> LaurentPolynomial {
    let nv = m.a[0].nvars();
    let k = xs.len();
    let big = nv + k;
    let map: Vec<usize> = (0..nv).collect();
    let lifted = m.map(|p| p.embed(big, &map));
    let mut acc = Mat::identity(m.n, &LaurentPolynomial::zero(big));
    for (l, x) in xs.iter().enumerate().rev() {
        let qv = LaurentPolynomial::var(big, nv + l);
        let step = Mat::from_fn(m.n, |i, j| {
            let base = if i == j { LaurentPolynomial::one(big) } else { LaurentPolynomial::zero(big) };
            &base + &qv.scale(x.get(i, j))
        });
        acc = acc.mul(&step);
    }
    let full = minor.eval(&acc.mul(&lifted));
    let mut out = LaurentPolynomial::zero(nv);
    for (e, c) in full.terms() {
        if e[nv..].iter().all(|&x| x == 1) {
            out.add_term(e[..nv].to_vec(), c.clone());
        }
    }
    out
}

/// (i,j,i) → (j,i,j) coordinates, as functions of the old ones.
fn braid_formula(m: usize, pos: usize) -> Vec<RationalFunction> {
    let v = |k: usize| LaurentPolynomial::var(m, k);
    let (a, b, c) = (v(pos), v(pos + 1), v(pos + 2));
    let s = &a + &c;
    (0..m)
        .map(|k| {
            if k == pos {
                RationalFunction::new(&b * &c, s.clone())
            } else if k == pos + 1 {
                RationalFunction::from_poly(s.clone())
            } else if k == pos + 2 {
                RationalFunction::new(&a * &b, s.clone())
            } else {
                RationalFunction::from_poly(v(k))
            }
        })
        .collect()
}

/// Apply one braid or commutation move at `pos` (0-based). Returns the new word
/// and the subtraction-free map T with θ_{new}(T(t)) = θ_{word}(t).
pub fn braid_transition(word: &[i32], pos: usize) -> Result<(Vec<i32>, Vec<PositiveRational>)> {
    let m = word.len();
    let none = || Error::NoMoveHere(pos);
    if pos + 1 >= m {
        return Err(none());
    }
    let (a, b) = (word[pos], word[pos + 1]);
    let commute = (a.signum() == b.signum() && (a - b).abs() >= 2) || (a.signum() != b.signum() && a.abs() != b.abs());
    if commute {
        let mut w = word.to_vec();
        w.swap(pos, pos + 1);
        let comps = (0..m)
            .map(|k| {
                let src = if k == pos { pos + 1 } else if k == pos + 1 { pos } else { k };
                PositiveRational::var(m, src)
            })
            .collect();
        return Ok((w, comps));
    }
    if pos + 2 < m {
        let c = word[pos + 2];
        if a == c && a.signum() == b.signum() && (a - b).abs() == 1 {
            let mut w = word.to_vec();
            w[pos] = b;
            w[pos + 1] = a;
            w[pos + 2] = b;
            let comps = braid_formula(m, pos)
                .into_iter()
                .map(PositiveRational::try_from_rational)
                .collect::<Result<Vec<_>>>()?;
            return Ok((w, comps));
        }
    }
    Err(none())
}

/// Identity on the torus block appended to a letter-coordinate map.
pub fn extend_with_torus(comps: &[PositiveRational], r: usize) -> Vec<PositiveRational> {
    let m = comps.len();
    let nv = m + r;
    let map: Vec<usize> = (0..m).collect();
    let mut out: Vec<PositiveRational> = comps
        .iter()
        .map(|c| PositiveRational::new(c.num().embed(nv, &map), c.den().embed(nv, &map)).expect("positivity is preserved by embedding"))
        .collect();
    for i in 0..r {
        out.push(PositiveRational::var(nv, m + i));
    }
    out
}

/// Shortest sequence of moves from `from` to `to`, with the composed transition
/// map. Both words must be reduced for the same element.
pub fn braid_path(from: &[i32], to: &[i32]) -> Result<(Vec<usize>, Vec<PositiveRational>)> {
    let m = from.len();
    let mut prev: BTreeMap<Vec<i32>, (Vec<i32>, usize)> = BTreeMap::new();
    let mut queue = VecDeque::from([from.to_vec()]);
    prev.insert(from.to_vec(), (vec![], usize::MAX));
    while let Some(w) = queue.pop_front() {
        if w == to {
            break;
        }
        for pos in 0..m {
            if let Ok((nw, _)) = braid_transition(&w, pos) {
                if !prev.contains_key(&nw) {
                    prev.insert(nw.clone(), (w.clone(), pos));
                    queue.push_back(nw);
                }
            }
        }
    }
    if !prev.contains_key(to) {
        return Err(Error::Invalid(format!("{to:?} is not braid-equivalent to {from:?}")));
    }
    let mut moves = Vec::new();
    let mut cur = to.to_vec();
    while cur != from {
        let (p, pos) = prev[&cur].clone();
        moves.push(pos);
        cur = p;
    }
    moves.reverse();
    let mut map: Vec<PositiveRational> = (0..m).map(|k| PositiveRational::var(m, k)).collect();
    let mut w = from.to_vec();
    for &pos in &moves {
        let (nw, step) = braid_transition(&w, pos)?;
        map = step.iter().map(|s| s.substitute(&map)).collect::<Result<Vec<_>>>()?;
        w = nw;
    }
    Ok((moves, map))
}

/// Traceless representative of a weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightVector(pub Vec<Q>);

impl WeightVector {
    pub fn from_set(n: usize, s: &[usize]) -> Self {
        let k = q(s.len() as i64) / q(n as i64);
        WeightVector((0..n).map(|i| if s.contains(&i) { Q::one() - &k } else { -k.clone() }).collect())
    }

    pub fn fundamental(n: usize, k: usize) -> Self {
        Self::from_set(n, &(0..k).collect::<Vec<_>>())
    }

    pub fn act(&self, w: &Permutation) -> Self {
        let mut out = vec![Q::zero(); self.0.len()];
        for (i, x) in self.0.iter().enumerate() {
            out[w.img[i]] = x.clone();
        }
        WeightVector(out)
    }

    /// Value on a diagonal Lie algebra element.
    pub fn on_diag(&self, h: &RatMatrix) -> Q {
        self.0.iter().enumerate().map(|(i, x)| x * h.get(i, i)).fold(Q::zero(), |s, t| s + t)
    }
}

pub fn weight_pairing(a: &WeightVector, b: &WeightVector, scale: &Q) -> Q {
    scale * a.0.iter().zip(&b.0).map(|(x, y)| x * y).fold(Q::zero(), |s, t| s + t)
}

/// Initial-seed minors Δ(−r..−1), Δ(1..m) for a reduced word of w0:
/// Δ(k) = Δ_{ω_{i_k}, v_{>k}ω_{i_k}} with v_{>k} = s_{i_m}⋯s_{i_{k+1}}, and
/// Δ(−j) = Δ_{ω_j, w0ω_j}.
pub fn cluster_minors(n: usize, word: &[usize]) -> Vec<MinorSet> {
    let w0 = Permutation::longest(n);
    let mut out: Vec<MinorSet> = (1..n).rev().map(|j| MinorSet::new((0..j).collect(), w0.apply_set(j))).collect();
    let m = word.len();
    for k in 0..m {
        let i = word[k];
        let tail: Vec<usize> = word[k + 1..].iter().rev().cloned().collect();
        let v = Permutation::from_word(n, &tail);
        out.push(MinorSet::new((0..i).collect(), v.apply_set(i)));
    }
    out
}

/// φ_i = Δ_{s_iω_i,w0ω_i}/Δ_{ω_i,w0ω_i} and ψ_i = Δ_{ω_i,w0s_iω_i}/Δ_{ω_i,w0ω_i}.
pub fn bk_minor_pairs(n: usize) -> Vec<(String, MinorSet, MinorSet)> {
    let w0 = Permutation::longest(n);
    let mut out = Vec::new();
    for i in 1..n {
        let s = Permutation::simple(n, i);
        let den = MinorSet::new((0..i).collect(), w0.apply_set(i));
        out.push((format!("phi_{i}"), MinorSet::new(s.apply_set(i), w0.apply_set(i)), den.clone()));
        out.push((format!("psi_{i}"), MinorSet::new((0..i).collect(), w0.compose(&s).apply_set(i)), den));
    }
    out
}

/// Δ∘θ = (coefficient-positive polynomial in letter variables) × (monomial in
/// the variables listed in `torus`).
pub fn has_positive_shape(p: &LaurentPolynomial, letters: &[usize], torus: &[usize]) -> bool {
    if !p.all_positive() {
        return false;
    }
    let mut hexp: Option<Vec<i32>> = None;
    for (e, _) in p.terms() {
        if letters.iter().any(|&i| e[i] < 0) {
            return false;
        }
        let h: Vec<i32> = torus.iter().map(|&i| e[i]).collect();
        match &hexp {
            None => hexp = Some(h),
            Some(x) if *x != h => return false,
            _ => {}
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_poly;

    fn names(k: usize) -> Vec<String> {
        (1..=k).map(|i| format!("x{i}")).collect()
    }

    #[test]
    fn chart_121() {
        let m = theta_chart(3, &[1, 2, 1], false).unwrap();
        let v = names(3);
        assert_eq!(*m.get(0, 1), parse_poly("x1+x3", &v).unwrap());
        assert_eq!(*m.get(0, 2), parse_poly("x1*x2", &v).unwrap());
        assert_eq!(*m.get(1, 2), parse_poly("x2", &v).unwrap());
    }

    #[test]
    fn chart_212() {
        let m = theta_chart(3, &[2, 1, 2], false).unwrap();
        let v = names(3);
        assert_eq!(*m.get(0, 1), parse_poly("x2", &v).unwrap());
        assert_eq!(*m.get(0, 2), parse_poly("x2*x3", &v).unwrap());
        assert_eq!(*m.get(1, 2), parse_poly("x1+x3", &v).unwrap());
    }

    #[test]
    fn chart_sl2_with_torus() {
        let m = theta_chart(2, &[1], true).unwrap();
        let v = names(2);
        assert_eq!(*m.get(0, 0), parse_poly("x2", &v).unwrap());
        assert_eq!(*m.get(0, 1), parse_poly("x1/x2", &v).unwrap());
        assert_eq!(*m.get(1, 1), parse_poly("1/x2", &v).unwrap());
        assert!(m.det() == LaurentPolynomial::one(2));
    }

    #[test]
    fn rejects_non_reduced() {
        assert!(matches!(theta_chart(3, &[1, 1], false), Err(Error::NotReduced(_))));
    }

    #[test]
    fn ldu_by_hand() {
        let m = Mat::from_fn(2, |i, j| q([[2, 1], [1, 1]][i][j]));
        let (l, d, u) = gaussian_decompose(&m).unwrap();
        assert_eq!(*l.get(1, 0), crate::poly::qf(1, 2));
        assert_eq!(*d.get(0, 0), q(2));
        assert_eq!(*d.get(1, 1), crate::poly::qf(1, 2));
        assert_eq!(*u.get(0, 1), crate::poly::qf(1, 2));
        assert_eq!(l.mul(&d).mul(&u), m);
    }

    #[test]
    fn cluster_set_sl3() {
        let labels: Vec<String> = cluster_minors(3, &[1, 2, 1]).iter().map(|m| m.label()).collect();
        assert_eq!(labels, vec!["Δ_{12,23}", "Δ_{1,3}", "Δ_{1,2}", "Δ_{12,12}", "Δ_{1,1}"]);
    }

    #[test]
    fn reduced_words_of_w0() {
        assert_eq!(Permutation::longest(3).reduced_words(), vec![vec![1, 2, 1], vec![2, 1, 2]]);
        assert_eq!(Permutation::longest(4).reduced_words().len(), 16);
    }

    #[test]
    fn pairing_values() {
        let half = weight_pairing(&WeightVector::fundamental(2, 1), &WeightVector::fundamental(2, 1), &Q::one());
        assert_eq!(half, crate::poly::qf(1, 2));
        let third = weight_pairing(&WeightVector::fundamental(3, 1), &WeightVector::fundamental(3, 2), &Q::one());
        assert_eq!(third, crate::poly::qf(1, 3));
    }
}

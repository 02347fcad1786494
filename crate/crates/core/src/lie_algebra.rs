//! Finite-dimensional Lie algebras by exact structure constants.
//!
//! Constants are stored sparsely for `A < B`; `[T_B, T_A]` is recovered by
//! antisymmetry.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::linalg::{self, Matrix};
use crate::invariant_tensor::latex_scalar;
use crate::scalar::{QSqrt2, ScalarExpr};

/// Generator label: a base symbol with indices, or an expanded pair `(A, α)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Label {
    Named { symbol: String, indices: Vec<u32> },
    Expanded(ExpandedLabel),
}

/// `(A, α)`: base generator `A` (with its own label) tagged by `λ_α`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ExpandedLabel {
    pub base: Box<Label>,
    pub base_index: usize,
    pub tag: usize,
}

impl Label {
    pub fn named(symbol: &str, indices: &[u32]) -> Label {
        Label::Named { symbol: symbol.to_string(), indices: indices.to_vec() }
    }
    pub fn expanded(base: &Label, base_index: usize, tag: usize) -> Label {
        Label::Expanded(ExpandedLabel { base: Box::new(base.clone()), base_index, tag })
    }
    pub fn as_expanded(&self) -> Option<&ExpandedLabel> {
        match self {
            Label::Expanded(e) => Some(e),
            Label::Named { .. } => None,
        }
    }
    /// Innermost named symbol and indices.
    pub fn root(&self) -> (&str, &[u32]) {
        match self {
            Label::Named { symbol, indices } => (symbol, indices),
            Label::Expanded(e) => e.base.root(),
        }
    }
}

impl Label {
    /// `S_{ij}` for a named generator, `S^{(α)}_{ij}` for an expanded one.
    pub fn latex(&self) -> String {
        let (symbol, indices) = self.root();
        let mut tags = Vec::new();
        let mut cur = self;
        while let Label::Expanded(e) = cur {
            tags.push(e.tag.to_string());
            cur = &e.base;
        }
        tags.reverse();
        let mut out = symbol.to_string();
        if !tags.is_empty() {
            out.push_str(&format!("^{{({})}}", tags.join(",")));
        }
        if !indices.is_empty() {
            out.push_str(&format!("_{{{}}}", indices.iter().join("")));
        }
        out
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Named { symbol, indices } if indices.is_empty() => write!(f, "{symbol}"),
            Label::Named { symbol, indices } => {
                write!(f, "{symbol}_{}", indices.iter().join(""))
            }
            Label::Expanded(e) => write!(f, "({},{})", e.base, e.tag),
        }
    }
}

pub type Bracket = Vec<(usize, QSqrt2)>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebra {
    pub name: String,
    labels: Vec<Label>,
    constants: BTreeMap<(usize, usize), Bracket>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AxiomViolation {
    /// `[T_A, T_A] ≠ 0` or inconsistent `(A,B)` and `(B,A)` data.
    Antisymmetry { a: usize, b: usize },
    /// Jacobi sum for `(A, B, D)` has nonzero component `E`.
    Jacobi { a: usize, b: usize, d: usize, e: usize, value: QSqrt2 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomReport {
    pub ok: bool,
    pub first_violation: Option<AxiomViolation>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KillingProfile {
    /// `(positive, negative, zero)`
    pub signature: (usize, usize, usize),
    pub derived_dim: usize,
    pub center_dim: usize,
}

impl LieAlgebra {
    /// Builds from triples `(A, B, C, C_{AB}^C)`. Triples with `A > B` are
    /// folded by antisymmetry; if both orders are present they must agree.
    pub fn from_triples(
        name: impl Into<String>,
        labels: Vec<Label>,
        triples: impl IntoIterator<Item = (usize, usize, usize, QSqrt2)>,
    ) -> Result<LieAlgebra> {
        let dim = labels.len();
        let mut fwd: BTreeMap<(usize, usize), BTreeMap<usize, QSqrt2>> = BTreeMap::new();
        let mut rev: BTreeMap<(usize, usize), BTreeMap<usize, QSqrt2>> = BTreeMap::new();
        for (a, b, c, v) in triples {
            if a >= dim || b >= dim || c >= dim {
                return Err(invalid(format!("index out of range in ({a},{b},{c})")));
            }
            if v.is_zero() {
                continue;
            }
            if a == b {
                return Err(invalid(format!("nonzero [T_{a}, T_{a}]")));
            }
            let map = if a < b { &mut fwd } else { &mut rev };
            let key = (a.min(b), a.max(b));
            *map.entry(key).or_default().entry(c).or_insert_with(QSqrt2::zero) += v;
        }
        for (key, r) in &rev {
            if let Some(f) = fwd.get(key) {
                let neg: BTreeMap<usize, QSqrt2> =
                    r.iter().map(|(c, v)| (*c, -*v)).filter(|(_, v)| !v.is_zero()).collect();
                let f: BTreeMap<usize, QSqrt2> =
                    f.iter().map(|(c, v)| (*c, *v)).filter(|(_, v)| !v.is_zero()).collect();
                if neg != f {
                    return Err(invalid(format!(
                        "antisymmetry violated between ({},{}) and ({},{})",
                        key.0, key.1, key.1, key.0
                    )));
                }
            }
        }
        let mut constants: BTreeMap<(usize, usize), Bracket> = BTreeMap::new();
        let keys: Vec<(usize, usize)> = fwd.keys().chain(rev.keys()).copied().sorted().dedup().collect();
        for key in keys {
            let entries: Bracket = match fwd.get(&key) {
                Some(f) => f.iter().map(|(c, v)| (*c, *v)).collect(),
                None => rev[&key].iter().map(|(c, v)| (*c, -*v)).collect(),
            };
            let entries: Bracket = entries.into_iter().filter(|(_, v)| !v.is_zero()).collect();
            if !entries.is_empty() {
                constants.insert(key, entries);
            }
        }
        Ok(LieAlgebra { name: name.into(), labels, constants })
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn with_labels(mut self, labels: Vec<Label>) -> Result<LieAlgebra> {
        if labels.len() != self.dim() {
            return Err(invalid("label count does not match dimension"));
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn renamed(mut self, name: impl Into<String>) -> LieAlgebra {
        self.name = name.into();
        self
    }

    /// Stored `A < B` brackets.
    pub fn stored(&self) -> impl Iterator<Item = (&(usize, usize), &Bracket)> {
        self.constants.iter()
    }

    /// All `(A, B, C, C_{AB}^C)` with `A < B`, sorted.
    pub fn triples(&self) -> Vec<(usize, usize, usize, QSqrt2)> {
        self.constants
            .iter()
            .flat_map(|(&(a, b), v)| v.iter().map(move |&(c, x)| (a, b, c, x)))
            .collect()
    }

    /// `[T_A, T_B]` as a sparse vector.
    pub fn basis_bracket(&self, a: usize, b: usize) -> Bracket {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => self.constants.get(&(a, b)).cloned().unwrap_or_default(),
            std::cmp::Ordering::Greater => self
                .constants
                .get(&(b, a))
                .map(|v| v.iter().map(|(c, x)| (*c, -*x)).collect())
                .unwrap_or_default(),
            std::cmp::Ordering::Equal => Vec::new(),
        }
    }

    pub fn constant(&self, a: usize, b: usize, c: usize) -> QSqrt2 {
        self.basis_bracket(a, b)
            .into_iter()
            .find(|(x, _)| *x == c)
            .map_or(QSqrt2::zero(), |(_, v)| v)
    }

    pub fn is_abelian(&self) -> bool {
        self.constants.is_empty()
    }

    /// Bracket of coordinate vectors.
    pub fn bracket(&self, x: &[QSqrt2], y: &[QSqrt2]) -> Result<Vec<QSqrt2>> {
        let n = self.dim();
        if x.len() != n || y.len() != n {
            return Err(invalid(format!(
                "bracket arguments have lengths {} and {}, expected {n}",
                x.len(),
                y.len()
            )));
        }
        let mut out = vec![QSqrt2::zero(); n];
        for (&(a, b), br) in &self.constants {
            let w = x[a] * y[b] - x[b] * y[a];
            if w.is_zero() {
                continue;
            }
            for &(c, v) in br {
                out[c] += w * v;
            }
        }
        Ok(out)
    }

    /// Exhaustive antisymmetry and Jacobi check.
    pub fn check_axioms(&self) -> AxiomReport {
        for &(a, b) in self.constants.keys() {
            if a >= b {
                return AxiomReport {
                    ok: false,
                    first_violation: Some(AxiomViolation::Antisymmetry { a, b }),
                };
            }
        }
        let n = self.dim();
        // the Jacobi sum is totally antisymmetric in (A, B, D)
        for a in 0..n {
            for b in a + 1..n {
                let ab = self.basis_bracket(a, b);
                for d in b + 1..n {
                    let mut acc: BTreeMap<usize, QSqrt2> = BTreeMap::new();
                    let mut push = |outer: &Bracket, other: usize| {
                        for &(c, v) in outer {
                            for (e, w) in self.basis_bracket(c, other) {
                                *acc.entry(e).or_insert_with(QSqrt2::zero) += v * w;
                            }
                        }
                    };
                    push(&ab, d);
                    push(&self.basis_bracket(b, d), a);
                    push(&self.basis_bracket(d, a), b);
                    if let Some((&e, &value)) = acc.iter().find(|(_, v)| !v.is_zero()) {
                        return AxiomReport {
                            ok: false,
                            first_violation: Some(AxiomViolation::Jacobi { a, b, d, e, value }),
                        };
                    }
                }
            }
        }
        AxiomReport { ok: true, first_violation: None }
    }

    /// `ad_A` with `(ad_A)[D][C] = C_{AC}^D`.
    pub fn ad(&self, a: usize) -> Matrix {
        let n = self.dim();
        let mut m = vec![vec![QSqrt2::zero(); n]; n];
        for c in 0..n {
            for (d, v) in self.basis_bracket(a, c) {
                m[d][c] = v;
            }
        }
        m
    }

    /// `B_{AB} = Σ C_{AC}^D C_{BD}^C`.
    pub fn killing_form(&self) -> Matrix {
        let n = self.dim();
        let ads: Vec<Matrix> = (0..n).map(|a| self.ad(a)).collect();
        let mut k = vec![vec![QSqrt2::zero(); n]; n];
        for a in 0..n {
            for b in a..n {
                let mut t = QSqrt2::zero();
                for d in 0..n {
                    for c in 0..n {
                        let x = ads[a][d][c];
                        if !x.is_zero() {
                            t += x * ads[b][c][d];
                        }
                    }
                }
                k[a][b] = t;
                k[b][a] = t;
            }
        }
        k
    }

    pub fn killing_profile(&self) -> KillingProfile {
        let n = self.dim();
        let derived: Matrix = self
            .constants
            .values()
            .map(|br| {
                let mut row = vec![QSqrt2::zero(); n];
                for &(c, v) in br {
                    row[c] = v;
                }
                row
            })
            .collect();
        let derived_dim = if derived.is_empty() { 0 } else { linalg::rank(&derived) };
        // rows (B, D), columns A: C_{AB}^D
        let mut cen = vec![vec![QSqrt2::zero(); n]; n * n];
        for a in 0..n {
            for b in 0..n {
                for (d, v) in self.basis_bracket(a, b) {
                    cen[b * n + d][a] = v;
                }
            }
        }
        let center_dim = n - if n == 0 { 0 } else { linalg::rank(&cen) };
        KillingProfile { signature: linalg::signature(&self.killing_form()), derived_dim, center_dim }
    }

    /// New basis `T'_i = Σ_j M_ij T_j`, so `C'_{ij}^k = M_ia M_jb C_{ab}^c (M⁻¹)_ck`.
    pub fn change_basis(&self, m: &Matrix) -> Result<LieAlgebra> {
        let n = self.dim();
        if m.len() != n || m.iter().any(|r| r.len() != n) {
            return Err(invalid("basis matrix has wrong shape"));
        }
        let minv = linalg::inverse(m)?;
        let mut triples = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let br = self.bracket(&m[i], &m[j])?;
                for k in 0..n {
                    let v = br
                        .iter()
                        .zip(&minv)
                        .filter(|(x, _)| !x.is_zero())
                        .fold(QSqrt2::zero(), |acc, (x, row)| acc + *x * row[k]);
                    triples.push((i, j, k, v));
                }
            }
        }
        LieAlgebra::from_triples(self.name.clone(), self.labels.clone(), triples)
    }

    /// Equality of dimension and structure constants, ignoring labels and name.
    pub fn same_constants(&self, other: &LieAlgebra) -> bool {
        self.dim() == other.dim() && self.constants == other.constants
    }

    /// First `(A, B, C)` where constants differ.
    pub fn first_difference(&self, other: &LieAlgebra) -> Option<(usize, usize, usize)> {
        let ta: BTreeMap<(usize, usize, usize), QSqrt2> =
            self.triples().into_iter().map(|(a, b, c, v)| ((a, b, c), v)).collect();
        let tb: BTreeMap<(usize, usize, usize), QSqrt2> =
            other.triples().into_iter().map(|(a, b, c, v)| ((a, b, c), v)).collect();
        ta.keys()
            .chain(tb.keys())
            .sorted()
            .find(|k| ta.get(k) != tb.get(k))
            .copied()
    }

    pub fn to_json(&self) -> String {
        let doc = AlgebraDoc {
            name: self.name.clone(),
            dim: self.dim(),
            labels: self.labels.clone(),
            constants: self
                .triples()
                .into_iter()
                .map(|(a, b, c, v)| ConstantDoc { a, b, c, coeff: v.to_string() })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("algebra serializes")
    }

    /// One line `[X, Y] = c Z + …` per nonzero stored bracket.
    pub fn commutator_table(&self) -> String {
        let mut out = String::new();
        for (&(a, b), br) in &self.constants {
            let rhs = br.iter().map(|(c, v)| format!("({v}) {}", self.labels[*c])).join(" + ");
            out.push_str(&format!("[{}, {}] = {rhs}\n", self.labels[a], self.labels[b]));
        }
        out
    }

    pub fn latex_commutators(&self) -> String {
        let mut out = String::from("\\begin{align}\n");
        for (&(a, b), br) in &self.constants {
            let rhs = br
                .iter()
                .map(|(c, v)| {
                    let coeff = match latex_scalar(&ScalarExpr::constant(*v)).as_str() {
                        "1" => String::new(),
                        "-1" => "-".into(),
                        c => format!("{c}\\,"),
                    };
                    format!("{coeff}{}", self.labels[*c].latex())
                })
                .join(" + ");
            out.push_str(&format!(
                "[{}, {}] &= {rhs} \\\\\n",
                self.labels[a].latex(),
                self.labels[b].latex()
            ));
        }
        out.push_str("\\end{align}\n");
        out
    }

    pub fn from_json(s: &str) -> Result<LieAlgebra> {
        let doc: AlgebraDoc = serde_json::from_str(s)?;
        if doc.labels.len() != doc.dim {
            return Err(invalid("dim does not match number of labels"));
        }
        let triples = doc
            .constants
            .iter()
            .map(|c| Ok((c.a, c.b, c.c, c.coeff.parse::<QSqrt2>()?)))
            .collect::<Result<Vec<_>>>()?;
        LieAlgebra::from_triples(doc.name, doc.labels, triples)
    }
}

#[derive(Serialize, Deserialize)]
struct AlgebraDoc {
    name: String,
    dim: usize,
    labels: Vec<Label>,
    constants: Vec<ConstantDoc>,
}

#[derive(Serialize, Deserialize)]
struct ConstantDoc {
    #[serde(rename = "A")]
    a: usize,
    #[serde(rename = "B")]
    b: usize,
    #[serde(rename = "C")]
    c: usize,
    #[serde(rename = "c")]
    coeff: String,
}

fn levi_civita3(i: usize, j: usize, k: usize) -> i128 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1,
        _ => 0,
    }
}

/// Rotation-type algebra on `J1..J3` plus optionally `K1..K3` with
/// `[K_i, K_j] = s ε_ijk J_k`.
fn rotation_family(name: &str, boost_sign: Option<i128>) -> LieAlgebra {
    let mut labels: Vec<Label> = (1..=3).map(|i| Label::named("J", &[i])).collect();
    let mut triples = Vec::new();
    for (i, j, k) in (0..3).cartesian_product(0..3).cartesian_product(0..3).map(|((i, j), k)| (i, j, k)) {
        let e = levi_civita3(i, j, k);
        if e == 0 {
            continue;
        }
        triples.push((i, j, k, QSqrt2::int(e)));
        if let Some(s) = boost_sign {
            triples.push((i, j + 3, k + 3, QSqrt2::int(e)));
            triples.push((i + 3, j + 3, k, QSqrt2::int(s * e)));
        }
    }
    if boost_sign.is_some() {
        labels.extend((1..=3).map(|i| Label::named("K", &[i])));
    }
    LieAlgebra::from_triples(name, labels, triples).expect("fixture is well formed")
}

pub fn metric(a: usize) -> i128 {
    if a == 0 {
        -1
    } else {
        1
    }
}

/// AdS algebra in `d` dimensions: `J_ab (a<b)` then `P_a`, with
/// `[J_ab, J_cd] = η_cb J_ad − η_ca J_bd + η_db J_ca − η_da J_cb`,
/// `[J_ab, P_c] = η_bc P_a − η_ac P_b`, `[P_a, P_b] = J_ab`
/// and `η = diag(−1, +1, …)`.
pub fn make_ads(d: usize) -> LieAlgebra {
    let pairs: Vec<(usize, usize)> = (0..d).tuple_combinations().collect();
    let np = pairs.len();
    let jidx = |a: usize, b: usize| -> Option<(usize, i128)> {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Some((pairs.iter().position(|&p| p == (a, b)).unwrap(), 1)),
            std::cmp::Ordering::Greater => {
                Some((pairs.iter().position(|&p| p == (b, a)).unwrap(), -1))
            }
            std::cmp::Ordering::Equal => None,
        }
    };
    let eta = |a: usize, b: usize| if a == b { metric(a) } else { 0 };
    let mut labels: Vec<Label> =
        pairs.iter().map(|&(a, b)| Label::named("J", &[a as u32, b as u32])).collect();
    labels.extend((0..d).map(|a| Label::named("P", &[a as u32])));
    let mut triples = Vec::new();
    let mut push_j = |x: usize, y: usize, c: i128, a: usize, b: usize| {
        if c != 0 {
            if let Some((k, s)) = jidx(a, b) {
                triples.push((x, y, k, QSqrt2::int(c * s)));
            }
        }
    };
    for (x, &(a, b)) in pairs.iter().enumerate() {
        for (y, &(c, dd)) in pairs.iter().enumerate() {
            push_j(x, y, eta(c, b), a, dd);
            push_j(x, y, -eta(c, a), b, dd);
            push_j(x, y, eta(dd, b), c, a);
            push_j(x, y, -eta(dd, a), c, b);
        }
    }
    for (x, &(a, b)) in pairs.iter().enumerate() {
        for c in 0..d {
            if eta(b, c) != 0 {
                triples.push((x, np + c, np + a, QSqrt2::int(eta(b, c))));
            }
            if eta(a, c) != 0 {
                triples.push((x, np + c, np + b, QSqrt2::int(-eta(a, c))));
            }
        }
    }
    for a in 0..d {
        for b in 0..d {
            if let Some((k, s)) = jidx(a, b) {
                triples.push((np + a, np + b, k, QSqrt2::int(s)));
            }
        }
    }
    LieAlgebra::from_triples(format!("ads{d}"), labels, triples).expect("fixture is well formed")
}

/// `so3`, `so31`, `so4`, `ads3`, `ads5` (and `ads<d>`).
pub fn make_named(name: &str) -> Result<LieAlgebra> {
    match name {
        "so3" => Ok(rotation_family("so3", None)),
        "so31" => Ok(rotation_family("so31", Some(-1))),
        "so4" => Ok(rotation_family("so4", Some(1))),
        _ => match name.strip_prefix("ads").and_then(|d| d.parse::<usize>().ok()) {
            Some(d) if d >= 2 => Ok(make_ads(d)),
            _ => Err(Error::UnknownFixture(name.to_string())),
        },
    }
}

pub fn make_abelian(dim: usize) -> LieAlgebra {
    let labels = (0..dim).map(|i| Label::named("X", &[i as u32])).collect();
    LieAlgebra::from_triples(format!("abelian{dim}"), labels, []).expect("abelian")
}

type IntMat = Vec<Vec<i64>>;

fn commutator(x: &Matrix, y: &Matrix) -> Matrix {
    let xy = linalg::mat_mul(x, y);
    let yx = linalg::mat_mul(y, x);
    xy.iter()
        .zip(&yx)
        .map(|(r, s)| r.iter().zip(s).map(|(a, b)| *a - *b).collect())
        .collect()
}

/// Lie closure of random `size × size` upper triangular integer matrices
/// (strictly upper when `nilpotent`), with constants in the closure basis.
pub fn random_matrix_algebra(seed: u64, size: usize, generators: usize, nilpotent: bool) -> LieAlgebra {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gens: Vec<IntMat> = (0..generators)
        .map(|_| {
            (0..size)
                .map(|i| {
                    (0..size)
                        .map(|j| {
                            let allowed = if nilpotent { j > i } else { j >= i };
                            if allowed {
                                rng.gen_range(-2..=2)
                            } else {
                                0
                            }
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    let to_q = |m: &IntMat| -> Matrix {
        m.iter().map(|r| r.iter().map(|&x| QSqrt2::int(x as i128)).collect()).collect()
    };
    let flat = |m: &Matrix| -> Vec<QSqrt2> { m.iter().flatten().copied().collect() };

    let mut basis: Vec<Matrix> = Vec::new();
    let mut echelon: Matrix = Vec::new();
    let try_add = |m: Matrix, basis: &mut Vec<Matrix>, echelon: &mut Matrix| -> bool {
        let mut trial = echelon.clone();
        trial.push(flat(&m));
        let r = linalg::rank(&trial);
        if r > echelon.len() {
            *echelon = trial;
            basis.push(m);
            true
        } else {
            false
        }
    };
    let mut queue: Vec<Matrix> = gens.iter().map(to_q).collect();
    while let Some(m) = queue.pop() {
        if try_add(m.clone(), &mut basis, &mut echelon) {
            for b in basis.clone() {
                queue.push(commutator(&m, &b));
            }
        }
    }
    let n = basis.len();
    // columns of the coordinate system are the flattened basis matrices
    let cols: Vec<Vec<QSqrt2>> = basis.iter().map(flat).collect();
    let len = cols.first().map_or(0, Vec::len);
    let sys: Matrix = (0..len).map(|r| cols.iter().map(|c| c[r]).collect()).collect();
    let mut triples = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let br = flat(&commutator(&basis[i], &basis[j]));
            let x = linalg::solve(&sys, &br).expect("closure is bracket-closed");
            for (k, v) in x.into_iter().enumerate() {
                triples.push((i, j, k, v));
            }
        }
    }
    let labels = (0..n).map(|i| Label::named("X", &[i as u32])).collect();
    let kind = if nilpotent { "nil" } else { "sol" };
    LieAlgebra::from_triples(format!("rand-{kind}-{seed}"), labels, triples).expect("closure")
}

/// First seed from `start` whose closure has exactly `dim` dimensions.
pub fn random_algebra_of_dim(start: u64, dim: usize, size: usize, generators: usize, nilpotent: bool) -> LieAlgebra {
    (start..start + 10_000)
        .map(|s| random_matrix_algebra(s, size, generators, nilpotent))
        .find(|l| l.dim() == dim)
        .unwrap_or_else(|| panic!("no random algebra of dimension {dim} found"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn unit() -> QSqrt2 {
        QSqrt2::one()
    }

    fn e(i: usize, n: usize) -> Vec<QSqrt2> {
        (0..n).map(|k| if k == i { unit() } else { QSqrt2::zero() }).collect()
    }

    #[test]
    fn so3_bracket() {
        let l = make_named("so3").unwrap();
        assert_eq!(l.bracket(&e(0, 3), &e(1, 3)).unwrap(), e(2, 3));
        assert!(l.bracket(&e(0, 3), &e(1, 4)).is_err());
    }

    #[test]
    fn so31_boosts_close_on_rotations() {
        let l = make_named("so31").unwrap();
        let neg_j3: Vec<QSqrt2> = e(2, 6).into_iter().map(|x| -x).collect();
        assert_eq!(l.bracket(&e(3, 6), &e(4, 6)).unwrap(), neg_j3);
    }

    #[test]
    fn fixtures_satisfy_axioms() {
        for name in ["so3", "so31", "so4", "ads3", "ads5"] {
            let l = make_named(name).unwrap();
            assert!(l.check_axioms().ok, "{name}: {:?}", l.check_axioms());
        }
        assert_eq!(make_named("ads5").unwrap().dim(), 15);
        assert_eq!(make_named("ads3").unwrap().dim(), 6);
    }

    #[test]
    fn broken_jacobi_is_reported() {
        let labels = (0..3).map(|i| Label::named("X", &[i])).collect();
        let l = LieAlgebra::from_triples(
            "bad",
            labels,
            [(0, 1, 1, unit()), (0, 2, 2, unit()), (1, 2, 0, unit())],
        )
        .unwrap();
        let r = l.check_axioms();
        assert!(!r.ok);
        assert!(matches!(r.first_violation, Some(AxiomViolation::Jacobi { a: 0, b: 1, d: 2, .. })));
    }

    #[test]
    fn inconsistent_orders_are_rejected() {
        let labels = (0..2).map(|i| Label::named("X", &[i])).collect();
        let r = LieAlgebra::from_triples("bad", labels, [(0, 1, 1, unit()), (1, 0, 1, unit())]);
        assert!(r.is_err());
    }

    #[test]
    fn killing_profiles() {
        let so3 = make_named("so3").unwrap().killing_profile();
        assert_eq!(so3.signature, (0, 3, 0));
        assert_eq!(so3.derived_dim, 3);
        assert_eq!(so3.center_dim, 0);
        let ab = make_abelian(4).killing_profile();
        assert_eq!(ab, KillingProfile { signature: (0, 0, 4), derived_dim: 0, center_dim: 4 });
        let so31 = make_named("so31").unwrap().killing_profile();
        let so4 = make_named("so4").unwrap().killing_profile();
        assert_eq!(so31.signature, (3, 3, 0));
        assert_eq!(so4.signature, (0, 6, 0));
    }

    #[test]
    fn doubling_basis_doubles_constants() {
        let l = make_named("so3").unwrap();
        let m = linalg::scalar_matrix(3, QSqrt2::int(2));
        let d = l.change_basis(&m).unwrap();
        for (a, b, c, v) in l.triples() {
            assert_eq!(d.constant(a, b, c), v * QSqrt2::int(2));
        }
        let sing = vec![vec![QSqrt2::zero(); 3]; 3];
        assert!(matches!(l.change_basis(&sing), Err(Error::SingularMatrix)));
    }

    #[test]
    fn json_round_trip() {
        let l = make_named("ads3").unwrap();
        let back = LieAlgebra::from_json(&l.to_json()).unwrap();
        assert_eq!(back, l);
    }

    #[test]
    fn random_nilpotent_has_expected_shape() {
        let l = random_algebra_of_dim(1, 6, 4, 3, true);
        assert!(l.check_axioms().ok);
        let p = l.killing_profile();
        assert_eq!(p.signature, (0, 0, 6));
        assert!(p.center_dim >= 1);
    }
}

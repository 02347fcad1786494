//! Config-driven runs: expansion steps, tensor lifts, Lagrangians and
//! comparisons against golden expressions.

use std::collections::BTreeMap;
use std::path::Path;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::expansion::{h_reduce, impose_sign_identification, resonant_subalgebra, s_expand, zero_reduce, ResonanceSpec};
use crate::fixtures;
use crate::graded_forms::{
    chern_simons, compare_mod_exact, connection, expand_target, expand_term, fit_terms, parse_scalar, Field,
    LieValuedForm, ScalarForm, Target,
};
use crate::invariant_tensor::{ads_epsilon, lift_0s, lift_h, rotate_tensor, verify_invariance, InvarianceReport, InvariantTensor};
use crate::lie_algebra::{make_named, AxiomReport, LieAlgebra};
use crate::linalg::{identity, mat_mul, Matrix};
use crate::scalar::{QSqrt2, ScalarExpr};
use crate::semigroup::{by_name, Semigroup};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AlgebraSource {
    Named(String),
    Path { path: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum Step {
    SExpand { semigroup: String },
    ZeroReduce,
    Resonant {
        #[serde(flatten)]
        spec: ResonanceSpec,
    },
    HReduce { n: usize },
    SignIdentify { pairing: Vec<usize> },
    /// `T'_(X,t0) = (T_(X,t0) + T_(X,t1))/√2`, `T'_(X,t1) = (T_(X,t0) − T_(X,t1))/√2`
    /// on generators whose root symbol is `symbol`.
    PairRotation { symbol: String, tags: [usize; 2] },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Lift {
    /// The ε tensor of the input algebra itself.
    None,
    H { n: usize },
    ZeroS { semigroup: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TensorSpec {
    pub lift: Lift,
    /// Coefficient of `λ_γ`, e.g. `["a0", "a1", "a2", "a3"]`.
    #[serde(default)]
    pub alphas: Vec<String>,
    /// Overall factor applied after basis changes.
    #[serde(default)]
    pub scale: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlotSpec {
    pub field: String,
    pub symbol: String,
    #[serde(default)]
    pub tag: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CompareMode {
    Exact,
    ModExact,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Piece {
    ChernSimons,
    /// Sum of the chain transgressions.
    SeparationSum,
    /// `Q(chain[i], chain[i+1])`.
    Transgression(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComparisonSpec {
    pub name: String,
    pub golden: String,
    pub piece: Piece,
    #[serde(default)]
    pub zero_fields: Vec<String>,
    pub mode: CompareMode,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LagrangianSpec {
    pub dim: usize,
    pub slots: Vec<SlotSpec>,
    /// Values substituted for `α_0, α_1, …` in the tensor.
    #[serde(default)]
    pub alphas: Option<Vec<String>>,
    /// Field sets of the separation chain, e.g. `[["w","e","k","h"], ["w","e"], ["w"], []]`.
    #[serde(default)]
    pub chain: Vec<Vec<String>>,
    #[serde(default)]
    pub comparisons: Vec<ComparisonSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub name: String,
    pub algebra: AlgebraSource,
    #[serde(default)]
    pub steps: Vec<Step>,
    #[serde(default)]
    pub tensor: Option<TensorSpec>,
    #[serde(default)]
    pub lagrangian: Option<LagrangianSpec>,
}

impl PipelineConfig {
    pub fn from_json(s: &str) -> Result<PipelineConfig> {
        Ok(serde_json::from_str(s)?)
    }
    pub fn load(path: &Path) -> Result<PipelineConfig> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

/// `β` couplings of the Lovelock series in terms of the expansion constants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LovelockDictionary {
    pub beta0: ScalarExpr,
    pub beta1: ScalarExpr,
    pub beta2: ScalarExpr,
}

impl LovelockDictionary {
    /// `β_0 = (α_0+α_1)/2`, `β_1 = (α_1+α_2)/(3ℓ²)`, `β_2 = (α_2+α_3)/(10ℓ⁴)`.
    pub fn from_alphas(a: &[ScalarExpr]) -> Result<LovelockDictionary> {
        if a.len() < 4 {
            return Err(invalid("Lovelock dictionary needs four alphas"));
        }
        let pair = |i: usize, c: QSqrt2, p: i32| -> Result<ScalarExpr> {
            Ok((&a[i] + &a[i + 1]).try_mul(&ScalarExpr::term(None, p, c))?)
        };
        Ok(LovelockDictionary {
            beta0: pair(0, QSqrt2::frac(1, 2), 0)?,
            beta1: pair(1, QSqrt2::frac(1, 3), -2)?,
            beta2: pair(2, QSqrt2::frac(1, 10), -4)?,
        })
    }
    pub fn json_value(&self) -> serde_json::Value {
        serde_json::json!({
            "beta0": self.beta0.to_string(),
            "beta1": self.beta1.to_string(),
            "beta2": self.beta2.to_string(),
        })
    }
}

#[derive(Clone, Debug)]
pub struct AlgebraRun {
    pub input: LieAlgebra,
    pub algebra: LieAlgebra,
    pub axioms: AxiomReport,
    /// Accumulated basis change since the last structural step.
    basis: Option<Matrix>,
}

fn load_algebra(src: &AlgebraSource, base_dir: Option<&Path>) -> Result<LieAlgebra> {
    match src {
        AlgebraSource::Named(n) => make_named(n),
        AlgebraSource::Path { path } => {
            let p = base_dir.map_or_else(|| Path::new(path).to_path_buf(), |d| d.join(path));
            LieAlgebra::from_json(&std::fs::read_to_string(p)?)
        }
    }
}

fn pair_rotation(l: &LieAlgebra, symbol: &str, tags: [usize; 2]) -> Result<Matrix> {
    let n = l.dim();
    let mut m = identity(n);
    let r = QSqrt2::sqrt2() * QSqrt2::frac(1, 2);
    let find = |base: usize, tag: usize| {
        l.labels().iter().position(|x| x.as_expanded().is_some_and(|e| e.base_index == base && e.tag == tag))
    };
    let mut touched = 0;
    for (i, lab) in l.labels().iter().enumerate() {
        let Some(e) = lab.as_expanded() else { continue };
        if lab.root().0 != symbol || e.tag != tags[0] {
            continue;
        }
        let j = find(e.base_index, tags[1]).ok_or_else(|| invalid(format!("no partner of {lab} at tag {}", tags[1])))?;
        m[i] = vec![QSqrt2::zero(); n];
        m[j] = vec![QSqrt2::zero(); n];
        m[i][i] = r;
        m[i][j] = r;
        m[j][i] = r;
        m[j][j] = -r;
        touched += 1;
    }
    if touched == 0 {
        return Err(invalid(format!("no generators `{symbol}` at tag {}", tags[0])));
    }
    Ok(m)
}

pub fn run_algebra(cfg: &PipelineConfig, base_dir: Option<&Path>) -> Result<AlgebraRun> {
    let input = load_algebra(&cfg.algebra, base_dir)?;
    let mut g = input.clone();
    let mut semigroup: Option<Semigroup> = None;
    let mut basis: Option<Matrix> = None;
    for (k, step) in cfg.steps.iter().enumerate() {
        let structural = !matches!(step, Step::PairRotation { .. });
        if structural && basis.is_some() {
            return Err(invalid(format!("step {k}: structural step after a basis change")));
        }
        g = match step {
            Step::SExpand { semigroup: name } => {
                let s = by_name(name)?;
                let out = s_expand(&s, &g);
                semigroup = Some(s);
                out
            }
            Step::ZeroReduce => {
                let s = semigroup.as_ref().ok_or_else(|| invalid(format!("step {k}: zero_reduce needs a prior s_expand")))?;
                zero_reduce(&g, s)?
            }
            Step::Resonant { spec } => {
                let s = semigroup.as_ref().ok_or_else(|| invalid(format!("step {k}: resonant needs a prior s_expand")))?;
                resonant_subalgebra(&g, s, spec)?
            }
            Step::HReduce { n } => {
                if k != 0 {
                    return Err(invalid(format!("step {k}: h_reduce expands the input algebra and must come first")));
                }
                h_reduce(*n, &g)?
            }
            Step::SignIdentify { pairing } => {
                let s = semigroup.as_ref().ok_or_else(|| invalid(format!("step {k}: sign_identify needs a prior s_expand")))?;
                impose_sign_identification(&g, s, pairing)?
            }
            Step::PairRotation { symbol, tags } => {
                let m = pair_rotation(&g, symbol, *tags)?;
                let out = g.change_basis(&m)?;
                basis = Some(match basis {
                    Some(b) => mat_mul(&m, &b),
                    None => m,
                });
                out
            }
        };
    }
    let axioms = g.check_axioms();
    Ok(AlgebraRun { input, algebra: g, axioms, basis })
}

#[derive(Clone, Debug)]
pub struct TensorRun {
    pub tensor: InvariantTensor,
    pub invariance: InvarianceReport,
}

fn scalars(xs: &[String]) -> Result<Vec<ScalarExpr>> {
    xs.iter().map(|s| parse_scalar(s)).collect()
}

pub fn run_tensor(run: &AlgebraRun, spec: &TensorSpec) -> Result<TensorRun> {
    let eps = ads_epsilon(&run.input)?;
    let alphas = scalars(&spec.alphas)?;
    let d = run.input.dim();
    // lifted index -> (base index, tag)
    let (lifted, key_of): (InvariantTensor, Box<dyn Fn(usize) -> (usize, Option<usize>)>) = match &spec.lift {
        Lift::None => (eps, Box::new(|i| (i, None))),
        Lift::H { n } => (lift_h(*n, &eps, &alphas)?, Box::new(move |i| (i % d, Some(i / d)))),
        Lift::ZeroS { semigroup } => {
            let s = by_name(semigroup)?;
            let tags = s.nonzero_elements();
            (lift_0s(&s, &eps, &alphas)?, Box::new(move |i| (i % d, Some(tags[i / d]))))
        }
    };
    let labels = run.algebra.labels();
    let position: BTreeMap<(usize, Option<usize>), usize> = labels
        .iter()
        .enumerate()
        .map(|(i, l)| match l.as_expanded() {
            Some(e) => ((e.base_index, Some(e.tag)), i),
            None => ((i, None), i),
        })
        .collect();
    let mut t = InvariantTensor::new(lifted.rank, run.algebra.dim());
    for (idx, v) in lifted.entries() {
        let mapped: Option<Vec<usize>> = idx.iter().map(|&i| position.get(&key_of(i)).copied()).collect();
        if let Some(m) = mapped {
            t.set(&m, v.clone())?;
        }
    }
    if let Some(b) = &run.basis {
        t = rotate_tensor(&t, b)?;
    }
    if let Some(s) = &spec.scale {
        let c = parse_scalar(s)?.as_constant().ok_or_else(|| invalid("tensor scale must be a number"))?;
        t = t.scale(c);
    }
    let invariance = verify_invariance(&run.algebra, &t);
    Ok(TensorRun { tensor: t, invariance })
}

fn field_of(s: &str) -> Result<Field> {
    match Field::from_token(s) {
        Some(f) if f != Field::Mc => Ok(f),
        _ => Err(invalid(format!("unknown field `{s}`"))),
    }
}

#[derive(Clone, Debug)]
pub struct TermReport {
    pub label: String,
    pub factors: String,
    pub printed: ScalarExpr,
    /// Fitted coefficient divided by the global scalar.
    pub fitted: Option<ScalarExpr>,
    pub agrees: bool,
}

#[derive(Clone, Debug)]
pub struct ComparisonReport {
    pub name: String,
    pub golden: String,
    pub mode: CompareMode,
    pub passed: bool,
    pub scalar: Option<ScalarExpr>,
    pub terms: Vec<TermReport>,
    /// Whether the fitted combination of golden terms accounts for the whole computed form.
    pub fit_consistent: bool,
    pub undetermined: Vec<String>,
}

impl ComparisonReport {
    pub fn json_value(&self) -> serde_json::Value {
        serde_json::json!({
            "name": self.name,
            "golden": self.golden,
            "mode": match self.mode { CompareMode::Exact => "exact", CompareMode::ModExact => "mod_exact" },
            "passed": self.passed,
            "scalar": self.scalar.as_ref().map(|s| s.to_string()),
            "fit_consistent": self.fit_consistent,
            "undetermined": self.undetermined,
            "terms": self.terms.iter().map(|t| serde_json::json!({
                "label": t.label,
                "factors": t.factors,
                "printed": t.printed.to_string(),
                "fitted": t.fitted.as_ref().map(|f| f.to_string()),
                "agrees": t.agrees,
            })).collect::<Vec<_>>(),
        })
    }

    pub fn render(&self) -> String {
        let mut s = format!(
            "{} vs {} [{}]: {}",
            self.name,
            self.golden,
            if self.mode == CompareMode::Exact { "exact" } else { "mod exact" },
            if self.passed { "PASS" } else { "FAIL" }
        );
        if let Some(sc) = &self.scalar {
            s.push_str(&format!(" (scalar {sc})"));
        }
        for t in &self.terms {
            let fitted = t.fitted.as_ref().map_or("-".to_string(), |f| f.to_string());
            s.push_str(&format!(
                "\n  {} {:<9} printed {:<22} fitted {:<22} {}",
                if t.agrees { " " } else { "!" },
                t.label,
                t.printed.to_string(),
                fitted,
                t.factors
            ));
        }
        if !self.fit_consistent {
            s.push_str("\n  ! computed form is not in the span of the golden terms");
        }
        s
    }
}

/// Compares a computed form with a golden target.
pub fn compare_with_target(name: &str, golden: &str, computed: &ScalarForm, target: &Target, mode: CompareMode) -> ComparisonReport {
    let expanded = expand_target(target);
    let (passed, scalar) = match mode {
        CompareMode::Exact => (computed == &expanded, Some(ScalarExpr::one())),
        CompareMode::ModExact => {
            let c = compare_mod_exact(computed, &expanded);
            (c.equal, c.scalar)
        }
    };
    let basis: Vec<ScalarForm> = target.terms.iter().map(|t| expand_term(t, target.dim, false)).collect();
    let mut fit = fit_terms(computed, &basis);
    // dependent golden terms are pinned to their printed values before refitting
    if let (false, Some(s)) = (fit.undetermined.is_empty(), &scalar) {
        let mut rest = computed.clone();
        let mut pinned = true;
        for &i in &fit.undetermined {
            match target.terms[i].coeff.try_mul(s) {
                Ok(c) => rest = rest.sub(&basis[i].scale(&c)),
                Err(_) => pinned = false,
            }
        }
        if pinned {
            let refit = fit_terms(&rest, &basis);
            fit.coefficients = refit.coefficients;
            fit.consistent = refit.consistent;
            fit.estimated = refit.estimated;
        }
    }
    let terms = target
        .terms
        .iter()
        .zip(&fit.coefficients)
        .enumerate()
        .map(|(i, (t, x))| {
            let fitted = if fit.undetermined.contains(&i) || !fit.estimated[i] { None } else { scalar.as_ref().and_then(|s| x.ratio(s).or_else(|| divide(x, s))) };
            let agrees = match &fitted {
                Some(f) => f == &t.coeff,
                None => fit.undetermined.contains(&i),
            };
            TermReport { label: t.label.clone(), factors: t.factors_text(), printed: t.coeff.clone(), fitted, agrees }
        })
        .collect();
    ComparisonReport {
        name: name.to_string(),
        golden: golden.to_string(),
        mode,
        passed,
        scalar,
        terms,
        fit_consistent: fit.consistent,
        undetermined: fit.undetermined.iter().map(|&i| target.terms[i].label.clone()).collect(),
    }
}

/// `x / s` for a single-term `s`.
fn divide(x: &ScalarExpr, s: &ScalarExpr) -> Option<ScalarExpr> {
    match s.terms() {
        [(k, c)] if k.alpha.is_none() => {
            let inv = ScalarExpr::term(None, -k.ell_pow, c.inv().ok()?);
            x.try_mul(&inv).ok()
        }
        _ if x.is_zero() => Some(ScalarExpr::zero()),
        _ => None,
    }
}

#[derive(Clone, Debug)]
pub struct LagrangianRun {
    pub connection: LieValuedForm,
    pub chern_simons: ScalarForm,
    /// `Q(chain[i], chain[i+1])`.
    pub pieces: Vec<ScalarForm>,
    pub comparisons: Vec<ComparisonReport>,
    pub lovelock: Option<LovelockDictionary>,
    /// Invariance of the tensor after the α dictionary is applied.
    pub invariance: InvarianceReport,
}

pub fn run_lagrangian(alg: &AlgebraRun, tensor: &InvariantTensor, spec: &LagrangianSpec) -> Result<LagrangianRun> {
    let dictionary = spec.alphas.as_ref().map(|a| scalars(a)).transpose()?;
    let tensor = match &dictionary {
        Some(a) => tensor.substitute_alphas(a),
        None => tensor.clone(),
    };
    let slots: Vec<(Field, &str, Option<usize>)> =
        spec.slots.iter().map(|s| Ok((field_of(&s.field)?, s.symbol.as_str(), s.tag))).collect::<Result<_>>()?;
    let build = |fields: &[String]| -> Result<LieValuedForm> {
        let chosen: Vec<Field> = fields.iter().map(|f| field_of(f)).collect::<Result<_>>()?;
        let sub: Vec<_> = slots.iter().copied().filter(|(f, _, _)| chosen.contains(f)).collect();
        connection(&alg.algebra, &sub)
    };
    let a = connection(&alg.algebra, &slots)?;
    let cs = chern_simons(&a, &alg.algebra, &tensor)?;
    let chain: Vec<LieValuedForm> = spec.chain.iter().map(|c| build(c)).collect::<Result<_>>()?;
    let pieces = if chain.len() >= 2 {
        crate::graded_forms::subspace_separation(&chain, &alg.algebra, &tensor)?
    } else {
        Vec::new()
    };
    let mut comparisons = Vec::new();
    for c in &spec.comparisons {
        let mut form = match &c.piece {
            Piece::ChernSimons => cs.clone(),
            Piece::SeparationSum => pieces.iter().fold(ScalarForm::zero(), |mut acc, p| {
                acc.add_assign(p);
                acc
            }),
            Piece::Transgression(i) => pieces
                .get(*i)
                .cloned()
                .ok_or_else(|| invalid(format!("comparison `{}`: no chain piece {i}", c.name)))?,
        };
        if !c.zero_fields.is_empty() {
            let z: Vec<Field> = c.zero_fields.iter().map(|f| field_of(f)).collect::<Result<_>>()?;
            form = form.without_fields(&z);
        }
        let mut target = fixtures::golden(&c.golden)?;
        if let Some(a) = &dictionary {
            for t in &mut target.terms {
                t.coeff = t.coeff.substitute_alphas(a);
            }
        }
        if target.dim != spec.dim {
            return Err(Error::InvalidArgument(format!("golden `{}` is for dimension {}", c.golden, target.dim)));
        }
        comparisons.push(compare_with_target(&c.name, &c.golden, &form, &target, c.mode));
    }
    let lovelock = if spec.dim == 5 {
        let base: Vec<ScalarExpr> = (0..4).map(|i| ScalarExpr::alpha(i as u8)).collect();
        Some(LovelockDictionary::from_alphas(&base)?)
    } else {
        None
    };
    let invariance = verify_invariance(&alg.algebra, &tensor);
    Ok(LagrangianRun { connection: a, chern_simons: cs, pieces, comparisons, lovelock, invariance })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lovelock_relations() {
        let a: Vec<ScalarExpr> = (0..4).map(ScalarExpr::alpha).collect();
        let d = LovelockDictionary::from_alphas(&a).unwrap();
        assert_eq!(d.beta0, parse_scalar("1/2*(a0+a1)").unwrap());
        assert_eq!(d.beta1, parse_scalar("1/3*(a1+a2)*l^-2").unwrap());
        assert_eq!(d.beta2, parse_scalar("1/10*(a2+a3)*l^-4").unwrap());
    }

    #[test]
    fn config_round_trip() {
        let cfg = fixtures::pipeline("c5").unwrap();
        let back = PipelineConfig::from_json(&serde_json::to_string(&cfg).unwrap()).unwrap();
        assert_eq!(cfg, back);
    }

    #[test]
    fn structural_step_after_rotation_is_rejected() {
        let cfg = PipelineConfig::from_json(
            r#"{"name":"x","algebra":"ads3","steps":[{"op":"h_reduce","n":2},
                {"op":"pair_rotation","symbol":"P","tags":[0,1]},{"op":"h_reduce","n":2}]}"#,
        )
        .unwrap();
        assert!(run_algebra(&cfg, None).is_err());
    }
}

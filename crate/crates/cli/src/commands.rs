//! Subcommand bodies.

use std::path::{Path, PathBuf};

use serde_json::json;

use liexp_core::fixtures;
use liexp_core::invariant_tensor::verify_invariance;
use liexp_core::lie_algebra::make_named;
use liexp_core::pipeline::{
    run_algebra, run_lagrangian, run_tensor, AlgebraRun, CompareMode, ComparisonSpec, Piece, PipelineConfig,
};
use liexp_core::semigroup::{by_name, find_isomorphism};
use liexp_core::{InvariantTensor, LieAlgebra, Semigroup};

use crate::output::{emit, pretty, Artifact, CliError, CliResult};
use crate::{CheckArgs, Output, SemigroupCommand, Source};

fn load(source: &Source) -> CliResult<(PipelineConfig, Option<PathBuf>)> {
    match (&source.config, &source.fixture) {
        (Some(path), _) => {
            let mut cfg = PipelineConfig::load(path)?;
            let base = path.parent().map(Path::to_path_buf);
            if let (Some(dir), Some(lag)) = (&base, cfg.lagrangian.as_mut()) {
                for c in &mut lag.comparisons {
                    if c.golden.ends_with(".target") && Path::new(&c.golden).is_relative() {
                        c.golden = dir.join(&c.golden).to_string_lossy().into_owned();
                    }
                }
            }
            Ok((cfg, base))
        }
        (None, Some(name)) => Ok((fixtures::pipeline(name)?, None)),
        (None, None) => Err(CliError::Usage("one of --config or --fixture is required".into())),
    }
}

fn algebra_run(cfg: &PipelineConfig, base: Option<&Path>) -> CliResult<AlgebraRun> {
    let run = run_algebra(cfg, base)?;
    if let Some(v) = &run.axioms.first_violation {
        return Err(CliError::Verification(format!("{}: {v:?}", cfg.name)));
    }
    Ok(run)
}

pub fn expand(source: &Source, out: &Output) -> CliResult<()> {
    let (cfg, base) = load(source)?;
    let run = run_algebra(&cfg, base.as_deref())?;
    let algebra: serde_json::Value = serde_json::from_str(&run.algebra.to_json())?;
    let artifact = Artifact {
        stem: "algebra".into(),
        json: json!({
            "pipeline": cfg.name,
            "algebra": algebra,
            "axioms": { "ok": run.axioms.ok, "first_violation": run.axioms.first_violation.as_ref().map(|v| format!("{v:?}")) },
        }),
        latex: run.algebra.latex_commutators(),
    };
    let summary = format!(
        "{} ({} generators)\n{}axioms: {}\n",
        run.algebra.name,
        run.algebra.dim(),
        run.algebra.commutator_table(),
        if run.axioms.ok { "ok" } else { "VIOLATED" }
    );
    emit(out, &artifact, &summary)?;
    match &run.axioms.first_violation {
        Some(v) => Err(CliError::Verification(format!("{v:?}"))),
        None => Ok(()),
    }
}

pub fn invariants(source: &Source, out: &Output) -> CliResult<()> {
    let (cfg, base) = load(source)?;
    let spec = cfg.tensor.as_ref().ok_or_else(|| CliError::Usage(format!("{}: config has no tensor section", cfg.name)))?;
    let run = algebra_run(&cfg, base.as_deref())?;
    let t = run_tensor(&run, spec)?;
    let tensor: serde_json::Value = serde_json::from_str(&t.tensor.to_json())?;
    let failure = t.invariance.first_failure.as_ref().map(|(a, idx, v)| format!("generator {a}, slots {idx:?}: {v}"));
    let artifact = Artifact {
        stem: "tensor".into(),
        json: json!({
            "pipeline": cfg.name,
            "tensor": tensor,
            "invariance": { "ok": t.invariance.ok, "first_failure": failure },
        }),
        latex: t.tensor.latex_table(run.algebra.labels()),
    };
    let summary = format!(
        "{}: rank {} tensor, {} independent entries, invariance {}\n",
        cfg.name,
        t.tensor.rank,
        t.tensor.len(),
        if t.invariance.ok { "ok" } else { "FAILED" }
    );
    emit(out, &artifact, &summary)?;
    match failure {
        Some(f) => Err(CliError::Verification(format!("tensor is not invariant ({f})"))),
        None => Ok(()),
    }
}

pub fn lagrangian(source: &Source, out: &Output, extra: &[String]) -> CliResult<()> {
    let (cfg, base) = load(source)?;
    let tspec = cfg.tensor.as_ref().ok_or_else(|| CliError::Usage(format!("{}: config has no tensor section", cfg.name)))?;
    let mut lspec = cfg
        .lagrangian
        .clone()
        .ok_or_else(|| CliError::Usage(format!("{}: config has no lagrangian section", cfg.name)))?;
    if !matches!(lspec.dim, 3 | 5) {
        return Err(CliError::Usage(format!("lagrangian dimension must be 3 or 5, got {}", lspec.dim)));
    }
    for g in extra {
        lspec.comparisons.push(ComparisonSpec {
            name: format!("--compare {g}"),
            golden: g.clone(),
            piece: Piece::ChernSimons,
            zero_fields: Vec::new(),
            mode: CompareMode::ModExact,
        });
    }
    let run = algebra_run(&cfg, base.as_deref())?;
    let t = run_tensor(&run, tspec)?;
    let lag = run_lagrangian(&run, &t.tensor, &lspec)?;
    let mut latex = format!("\\begin{{dmath}}\nL = {}\n\\end{{dmath}}\n", lag.chern_simons.latex());
    for (i, p) in lag.pieces.iter().enumerate() {
        latex.push_str(&format!("\\begin{{dmath}}\nQ_{{{i}}} = {}\n\\end{{dmath}}\n", p.latex()));
    }
    let artifact = Artifact {
        stem: "lagrangian".into(),
        json: json!({
            "pipeline": cfg.name,
            "tensor_invariant": lag.invariance.ok,
            "chern_simons": lag.chern_simons.json_value(),
            "pieces": lag.pieces.iter().map(|p| p.json_value()).collect::<Vec<_>>(),
            "comparisons": lag.comparisons.iter().map(|c| c.json_value()).collect::<Vec<_>>(),
            "lovelock": lag.lovelock.as_ref().map(|d| d.json_value()),
        }),
        latex,
    };
    let mut summary = format!(
        "{}: {} monomials, pieces {:?}{}\n",
        cfg.name,
        lag.chern_simons.len(),
        lag.pieces.iter().map(|p| p.len()).collect::<Vec<_>>(),
        if lag.invariance.ok { "" } else { " (tensor is not invariant)" }
    );
    for c in &lag.comparisons {
        summary.push_str(&c.render());
        summary.push('\n');
    }
    emit(out, &artifact, &summary)?;
    let failed: Vec<&str> = lag.comparisons.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        if out.out.is_some() {
            for c in lag.comparisons.iter().filter(|c| !c.passed) {
                eprintln!("{}", c.render());
            }
        }
        Err(CliError::Verification(format!("comparisons failed: {}", failed.join(", "))))
    }
}

fn semigroup_arg(s: &str) -> CliResult<Semigroup> {
    if Path::new(s).is_file() {
        Ok(Semigroup::from_json(&std::fs::read_to_string(s)?)?)
    } else {
        Ok(by_name(s)?)
    }
}

pub fn semigroup(cmd: SemigroupCommand) -> CliResult<()> {
    match cmd {
        SemigroupCommand::Construct { name, output } => {
            let s = by_name(&name)?;
            let rows: Vec<String> = s.table.iter().map(|r| r.iter().map(|x| format!("\\lambda_{{{x}}}")).collect::<Vec<_>>().join(" & ")).collect();
            let latex = format!(
                "\\begin{{array}}{{{}}}\n{}\n\\end{{array}}\n",
                "c".repeat(s.order),
                rows.join(" \\\\\n")
            );
            let artifact = Artifact { stem: "semigroup".into(), json: serde_json::to_value(&s)?, latex };
            emit(&output, &artifact, &format!("{}: order {}, zero {:?}\n", s.name, s.order, s.zero))
        }
        SemigroupCommand::Verify { file } => {
            let s: Semigroup = serde_json::from_str(&std::fs::read_to_string(&file)?)?;
            s.validate().map_err(|e| CliError::Verification(e.to_string()))?;
            println!("{}: valid abelian semigroup of order {}", s.name, s.order);
            Ok(())
        }
        SemigroupCommand::Isomorphism { first, second } => {
            let (a, b) = (semigroup_arg(&first)?, semigroup_arg(&second)?);
            match find_isomorphism(&a, &b)? {
                Some(map) => {
                    print!("{}", pretty(&json!({ "isomorphic": true, "map": map })));
                    Ok(())
                }
                None => {
                    print!("{}", pretty(&json!({ "isomorphic": false })));
                    Err(CliError::Verification(format!("{} and {} are not isomorphic", a.name, b.name)))
                }
            }
        }
    }
}

pub fn check(args: &CheckArgs) -> CliResult<()> {
    let algebra = if Path::new(&args.algebra).is_file() {
        LieAlgebra::from_json(&std::fs::read_to_string(&args.algebra)?)?
    } else {
        make_named(&args.algebra)?
    };
    let axioms = algebra.check_axioms();
    let mut report = json!({
        "algebra": algebra.name,
        "axioms": { "ok": axioms.ok, "first_violation": axioms.first_violation.as_ref().map(|v| format!("{v:?}")) },
    });
    let mut ok = axioms.ok;
    if let Some(path) = &args.tensor {
        let t = InvariantTensor::from_json(&std::fs::read_to_string(path)?)?;
        if t.dim != algebra.dim() {
            return Err(CliError::Usage(format!("tensor dimension {} does not match algebra dimension {}", t.dim, algebra.dim())));
        }
        let inv = verify_invariance(&algebra, &t);
        ok &= inv.ok;
        report["invariance"] = json!({
            "ok": inv.ok,
            "first_failure": inv.first_failure.map(|(a, idx, v)| format!("generator {a}, slots {idx:?}: {v}")),
        });
    }
    print!("{}", pretty(&report));
    if ok {
        Ok(())
    } else {
        Err(CliError::Verification("see report".into()))
    }
}

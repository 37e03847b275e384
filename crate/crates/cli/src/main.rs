mod dot;

use clap::{Parser, Subcommand, ValueEnum};
use fidl_lab::checks::{run_module_suite, Outcome};
use fidl_lab::congruence::{
    classify, enumerate_congruences_oracle, enumerate_strongly_closed, theta_of_pair,
    CongruenceError, CongruenceSort,
};
use fidl_lab::doc::{
    canonical_json, check_document, frame_payload, module_payload, parse_frame, parse_hom_maps,
    parse_module, parse_subalgebra_carriers, CheckedPayload, DocError, DocKind, DocMeta,
    InstanceDocument,
};
use fidl_lab::frame::{canonical_frame, complex_module, counit_iso, representation_iso};
use fidl_lab::gen::{gen_module_with, instance_rng, FuzzConfig, Strategy};
use fidl_lab::module::{validate_module, ModuleError};
use fidl_lab::morphism::{
    validate_hom, validate_subalgebra_direct, validate_subalgebra_relational, SubalgebraCandidate,
};
use fidl_lab::subset::Subset;
use fidl_lab::Budget;
use serde_json::json;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const EXIT_PROPERTY_FAILURE: u8 = 1;
const EXIT_MALFORMED: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(
    name = "fidl",
    about = "Finite-model workbench for lattice modules with fusion and implication",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum DualizeTarget {
    Frame,
    Module,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    #[value(name = "heyting-power")]
    HeytingPower,
    Modal,
    Product,
    #[value(name = "random-tables")]
    RandomTables,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Strategy {
        match s {
            StrategyArg::HeytingPower => Strategy::HeytingPower,
            StrategyArg::Modal => Strategy::Modal,
            StrategyArg::Product => Strategy::Product,
            StrategyArg::RandomTables => Strategy::RandomTables,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Validate a document; exit 0 when every law holds.
    Check {
        file: PathBuf,
        /// Re-emit the validated document with derived tables on stdout.
        #[arg(long)]
        derived: bool,
    },
    /// Translate a module to its canonical frame or a frame to its module of
    /// increasing sets.
    Dualize {
        file: PathBuf,
        #[arg(long, value_enum)]
        to: DualizeTarget,
        /// Also verify the back-and-forth isomorphism.
        #[arg(long)]
        roundtrip: bool,
    },
    /// Enumerate congruences and closed pairs, with the correspondence table
    /// and the classification verdict.
    Congruences { file: PathBuf },
    /// Classify a module as trivial, simple, subdirectly irreducible or
    /// neither.
    Classify { file: PathBuf },
    /// Check a carrier pair against both subalgebra criteria.
    Subalg { module: PathBuf, carriers: PathBuf },
    /// Validate a homomorphism between two module documents.
    Hom {
        src: PathBuf,
        tgt: PathBuf,
        maps: PathBuf,
    },
    /// Generate a deterministic corpus and run the property suite over it.
    Fuzz {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        count: usize,
        #[arg(long, value_enum)]
        strategy: StrategyArg,
        #[arg(long = "max-a", default_value_t = 8)]
        max_a: usize,
        #[arg(long = "max-b", default_value_t = 6)]
        max_b: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Emit order diagrams (and relation hypergraphs) in DOT form.
    ExportDot { file: PathBuf },
}

struct Failure {
    code: u8,
    message: serde_json::Value,
}

impl Failure {
    fn malformed(msg: impl std::fmt::Display) -> Failure {
        Failure {
            code: EXIT_MALFORMED,
            message: json!({ "error": "malformed", "detail": msg.to_string() }),
        }
    }

    fn property(witness: serde_json::Value) -> Failure {
        Failure {
            code: EXIT_PROPERTY_FAILURE,
            message: witness,
        }
    }

    fn budget(msg: impl std::fmt::Display) -> Failure {
        Failure {
            code: EXIT_BUDGET,
            message: json!({ "error": "budget-exceeded", "detail": msg.to_string() }),
        }
    }
}

impl From<DocError> for Failure {
    fn from(e: DocError) -> Failure {
        if e.is_malformed() {
            Failure::malformed(e)
        } else {
            let witness = match &e {
                DocError::Module(ModuleError::AxiomViolations(vs)) => {
                    json!({ "error": "axiom-violations", "witnesses": vs })
                }
                other => json!({ "error": "invalid", "detail": other.to_string() }),
            };
            Failure::property(witness)
        }
    }
}

impl From<CongruenceError> for Failure {
    fn from(e: CongruenceError) -> Failure {
        match e {
            CongruenceError::BudgetExceeded { .. } => Failure::budget(e),
            other => Failure::property(json!({ "error": other.to_string() })),
        }
    }
}

fn budget_from_env() -> Budget {
    match std::env::var("FIDL_BUDGET_OVERRIDE") {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) => Budget::with_override(n),
            Err(_) => Budget::default(),
        },
        Err(_) => Budget::default(),
    }
}

fn read_document(path: &Path) -> Result<InstanceDocument, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::malformed(format!("{}: {e}", path.display())))?;
    InstanceDocument::parse(&text).map_err(Failure::from)
}

fn read_module(path: &Path) -> Result<fidl_lab::module::FidlModule, Failure> {
    let doc = read_document(path)?;
    if !matches!(doc.kind, DocKind::Module) {
        return Err(Failure::malformed(format!(
            "{} is a {} document, expected module",
            path.display(),
            doc.kind
        )));
    }
    Ok(parse_module(&doc.payload)?)
}

fn cmd_check(file: &Path, derived: bool) -> Result<(), Failure> {
    let doc = read_document(file)?;
    let checked = check_document(&doc)?;
    if derived {
        if let CheckedPayload::Lattice(l) = &checked {
            let out = InstanceDocument {
                kind: DocKind::Lattice,
                payload: fidl_lab::doc::lattice_payload_derived(l),
                meta: doc.meta.clone(),
            };
            print!("{}", out.to_canonical_string());
            return Ok(());
        }
    }
    print!(
        "{}",
        canonical_json(&json!({ "kind": doc.kind.to_string(), "valid": true }))
    );
    Ok(())
}

fn cmd_dualize(file: &Path, to: DualizeTarget, roundtrip: bool) -> Result<(), Failure> {
    let budget = budget_from_env();
    let doc = read_document(file)?;
    match (doc.kind, to) {
        (DocKind::Module, DualizeTarget::Frame) => {
            let m = parse_module(&doc.payload)?;
            let dual = canonical_frame(&m);
            let mut out = InstanceDocument::new(
                DocKind::Frame,
                frame_payload(dual.frame()),
                &format!("{}-canonical-frame", doc.meta.name),
            );
            if roundtrip {
                let rep = representation_iso(&m, budget.lattice_max)
                    .map_err(|e| Failure::property(json!({ "error": e.to_string() })))?;
                if !rep.is_iso {
                    return Err(Failure::property(
                        json!({ "error": "representation is not an isomorphism" }),
                    ));
                }
                out.meta.generator = Some("roundtrip-verified".into());
            }
            print!("{}", out.to_canonical_string());
            Ok(())
        }
        (DocKind::Frame, DualizeTarget::Module) => {
            let f = parse_frame(&doc.payload)?;
            let cm = complex_module(&f, budget.lattice_max).map_err(|e| match e {
                fidl_lab::frame::FrameError::BudgetExceeded { .. } => Failure::budget(e),
                other => Failure::property(json!({ "error": other.to_string() })),
            })?;
            let mut out = InstanceDocument::new(
                DocKind::Module,
                module_payload(&cm.module),
                &format!("{}-increasing-set-module", doc.meta.name),
            );
            if roundtrip {
                let c = counit_iso(&f, budget.lattice_max)
                    .map_err(|e| Failure::property(json!({ "error": e.to_string() })))?;
                if !c.is_iso {
                    return Err(Failure::property(
                        json!({ "error": "counit is not an isomorphism" }),
                    ));
                }
                out.meta.generator = Some("roundtrip-verified".into());
            }
            print!("{}", out.to_canonical_string());
            Ok(())
        }
        (kind, _) => Err(Failure::malformed(format!(
            "cannot dualize a {kind} document in that direction"
        ))),
    }
}

fn cmd_congruences(file: &Path) -> Result<(), Failure> {
    let budget = budget_from_env();
    let m = read_module(file)?;
    let dual = canonical_frame(&m);
    let congruences = enumerate_congruences_oracle(&m, CongruenceSort::Both, &budget)?;
    let closed = enumerate_strongly_closed(dual.frame(), &budget)?;
    // The correspondence table: each closed pair with its congruence image's
    // position in the enumerated list.
    let mut table = Vec::new();
    for pair in &closed {
        let image = theta_of_pair(&m, &dual, pair);
        let position = congruences.iter().position(|c| *c == image);
        table.push(json!({
            "closedPair": fidl_lab::doc::closed_pair_payload(pair),
            "congruenceIndex": position,
        }));
    }
    let report = classify(&m, &budget)?;
    let out = json!({
        "congruences": congruences.iter().map(fidl_lab::doc::congruence_payload).collect::<Vec<_>>(),
        "stronglyClosed": closed.iter().map(fidl_lab::doc::closed_pair_payload).collect::<Vec<_>>(),
        "bijection": table,
        "classification": report,
    });
    print!("{}", canonical_json(&out));
    Ok(())
}

fn cmd_classify(file: &Path) -> Result<(), Failure> {
    let budget = budget_from_env();
    let m = read_module(file)?;
    let report = classify(&m, &budget)?;
    print!(
        "{}",
        canonical_json(&serde_json::to_value(&report).expect("report serializes"))
    );
    Ok(())
}

fn cmd_subalg(module: &Path, carriers: &Path) -> Result<(), Failure> {
    let m = read_module(module)?;
    let doc = read_document(carriers)?;
    if !matches!(doc.kind, DocKind::Subalgebra) {
        return Err(Failure::malformed(
            "second argument must be a subalgebra document",
        ));
    }
    let (ca, cb) = parse_subalgebra_carriers(&doc.payload)?;
    if ca.iter().any(|&v| v >= m.size_a()) || cb.iter().any(|&v| v >= m.size_b()) {
        return Err(Failure::malformed("carrier index out of range"));
    }
    let candidate = SubalgebraCandidate {
        carrier_a: Subset::from_indices(m.size_a(), &ca),
        carrier_b: Subset::from_indices(m.size_b(), &cb),
    };
    let direct = validate_subalgebra_direct(&m, &candidate)
        .map_err(|e| Failure::property(json!({ "error": e.to_string() })))?;
    let dual = canonical_frame(&m);
    let relational = validate_subalgebra_relational(&m, &dual, &candidate)
        .map_err(|e| Failure::property(json!({ "error": e.to_string() })))?;
    let agree = direct.fusion_closed == relational.fusion_closed
        && direct.implication_closed == relational.implication_closed;
    let out = json!({
        "direct": direct,
        "relational": relational,
        "isSubalgebra": direct.is_subalgebra(),
        "checkersAgree": agree,
    });
    print!("{}", canonical_json(&out));
    if agree {
        Ok(())
    } else {
        Err(Failure::property(
            json!({ "error": "subalgebra checkers disagree" }),
        ))
    }
}

fn cmd_hom(src: &Path, tgt: &Path, maps: &Path) -> Result<(), Failure> {
    let source = read_module(src)?;
    let target = read_module(tgt)?;
    let doc = read_document(maps)?;
    if !matches!(doc.kind, DocKind::Hom) {
        return Err(Failure::malformed("third argument must be a hom document"));
    }
    let (alpha, gamma) = parse_hom_maps(&doc.payload)?;
    match validate_hom(&source, &target, alpha, gamma) {
        Ok(hom) => {
            let iso = fidl_lab::morphism::is_iso(&hom);
            print!(
                "{}",
                canonical_json(&json!({ "valid": true, "iso": iso.is_iso }))
            );
            Ok(())
        }
        Err(e) => Err(Failure::property(json!({ "error": e.to_string() }))),
    }
}

fn cmd_fuzz(config: &FuzzConfig, out_dir: &Path) -> Result<(), Failure> {
    if config.count == 0 {
        return Err(Failure::malformed("count must be at least 1"));
    }
    let FuzzConfig {
        seed,
        max_a,
        max_b,
        count,
        strategy,
    } = *config;
    let budget = budget_from_env();
    std::fs::create_dir_all(out_dir)
        .map_err(|e| Failure::malformed(format!("{}: {e}", out_dir.display())))?;
    let mut property_totals: Vec<(&'static str, usize, usize, usize)> = Vec::new();
    let mut hard_failure = false;
    let mut accepted = 0usize;
    let mut discrepancies = Vec::new();
    for index in 0..count {
        let mut rng = instance_rng(seed, index as u64);
        let m = gen_module_with(&mut rng, strategy, max_a, max_b, &budget);
        let revalidated = validate_module(
            m.lattice_a().clone(),
            m.lattice_b().clone(),
            &m.fusion_rows(),
            &m.implication_rows(),
        )
        .is_ok();
        if revalidated {
            accepted += 1;
        }
        let name = format!("{}-{seed}-{index:04}", strategy.name());
        let doc = InstanceDocument {
            kind: DocKind::Module,
            payload: module_payload(&m),
            meta: DocMeta {
                name: name.clone(),
                seed: Some(seed),
                generator: Some(format!("fidl-fuzz/{}", env!("CARGO_PKG_VERSION"))),
            },
        };
        std::fs::write(
            out_dir.join(format!("{name}.json")),
            doc.to_canonical_string(),
        )
        .map_err(|e| Failure::malformed(format!("write failed: {e}")))?;
        for result in run_module_suite(&m, &budget) {
            let slot = property_totals
                .iter_mut()
                .find(|(name, ..)| *name == result.name);
            let slot = match slot {
                Some(s) => s,
                None => {
                    property_totals.push((result.name, 0, 0, 0));
                    property_totals.last_mut().unwrap()
                }
            };
            match result.outcome {
                Outcome::Pass => slot.1 += 1,
                Outcome::Fail(_) => {
                    slot.2 += 1;
                    hard_failure = true;
                }
                Outcome::Skipped(_) => slot.3 += 1,
            }
        }
        // Spectral-criterion disagreements are diagnostics, not failures;
        // collect them for the summary.
        if let Ok(report) = classify(&m, &budget) {
            for record in report.discrepancies {
                discrepancies.push(json!({
                    "instance": name,
                    "record": record,
                }));
            }
        }
    }
    let summary = json!({
        "seed": seed,
        "count": count,
        "strategy": strategy.name(),
        "acceptanceRate": format!("{accepted}/{count}"),
        "properties": property_totals
            .iter()
            .map(|(name, pass, fail, skip)| json!({
                "property": name,
                "pass": pass,
                "fail": fail,
                "skipped": skip,
            }))
            .collect::<Vec<_>>(),
        "discrepancies": discrepancies,
    });
    print!("{}", canonical_json(&summary));
    if hard_failure {
        Err(Failure::property(
            json!({ "error": "property suite failed" }),
        ))
    } else {
        Ok(())
    }
}

fn cmd_export_dot(file: &Path) -> Result<(), Failure> {
    let doc = read_document(file)?;
    let text = match check_document(&doc)? {
        CheckedPayload::Lattice(l) => dot::lattice_dot(&l, &doc.meta.name),
        CheckedPayload::Module(m) => dot::module_dot(&m, &doc.meta.name),
        CheckedPayload::Frame(f) => dot::frame_dot(&f, &doc.meta.name),
        _ => {
            return Err(Failure::malformed(format!(
                "cannot draw a {} document",
                doc.kind
            )))
        }
    };
    print!("{text}");
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.cmd {
        Cmd::Check { file, derived } => cmd_check(file, *derived),
        Cmd::Dualize {
            file,
            to,
            roundtrip,
        } => cmd_dualize(file, *to, *roundtrip),
        Cmd::Congruences { file } => cmd_congruences(file),
        Cmd::Classify { file } => cmd_classify(file),
        Cmd::Subalg { module, carriers } => cmd_subalg(module, carriers),
        Cmd::Hom { src, tgt, maps } => cmd_hom(src, tgt, maps),
        Cmd::Fuzz {
            seed,
            count,
            strategy,
            max_a,
            max_b,
            out,
        } => cmd_fuzz(
            &FuzzConfig {
                seed: *seed,
                max_a: *max_a,
                max_b: *max_b,
                count: *count,
                strategy: (*strategy).into(),
            },
            out,
        ),
        Cmd::ExportDot { file } => cmd_export_dot(file),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            print!("{}", canonical_json(&f.message));
            ExitCode::from(f.code)
        }
    }
}

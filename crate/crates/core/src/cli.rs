//! The command-line pipeline as a library call, so that output can be
//! produced and compared without spawning a process.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::parallel::Parallelism;
use crate::presentation::{complete_table, parse_presentation, state_to_doc, validate, Presentation, TermDoc};
use crate::quotient::{quotient_basis, QuotientDoc};
use crate::reduction::{ReductionStrategy, SingularReport};
use crate::syntax::parse_state;
use crate::zhu::{collect_seeds, relation_closure, ClosureBounds, SeedSelection, ZhuPresentation};

pub const DEFAULT_QUOTIENT_BOUND: u32 = 12;

pub const EXIT_OK: u8 = 0;
pub const EXIT_INVALID: u8 = 1;
pub const EXIT_PARTIAL: u8 = 2;
pub const EXIT_PARSE: u8 = 3;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Subcommand {
    Validate,
    Complete,
    Nf(String),
    Singular,
    Zhu,
    Quotient,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Json,
    Text,
}

/// Overrides of the bounds stored in the presentation. Zero is rejected.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BoundOverrides {
    pub mode_depth: Option<u32>,
    pub membership: Option<u32>,
    pub quotient: Option<u32>,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub subcommand: Subcommand,
    pub input: PathBuf,
    /// `None` writes to stdout.
    pub output: Option<PathBuf>,
    pub bounds: BoundOverrides,
    pub strategy: ReductionStrategy,
    pub seeds: SeedSelection,
    pub format: Format,
    pub parallelism: Parallelism,
}

impl RunConfig {
    pub fn new(subcommand: Subcommand, input: impl Into<PathBuf>) -> Self {
        RunConfig {
            subcommand,
            input: input.into(),
            output: None,
            bounds: BoundOverrides::default(),
            strategy: ReductionStrategy::default(),
            seeds: SeedSelection::default(),
            format: Format::default(),
            parallelism: Parallelism::default(),
        }
    }
}

/// Result of a run: the exit status, the document (if one was produced) and
/// a message for stderr.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunOutcome {
    pub exit: u8,
    pub document: Option<String>,
    pub message: Option<String>,
}

impl RunOutcome {
    fn fail(exit: u8, message: String) -> Self {
        RunOutcome {
            exit,
            document: None,
            message: Some(message),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalFormDoc {
    pub input: String,
    pub value: Vec<TermDoc>,
    pub text: String,
}

fn render<T: Serialize>(format: Format, doc: &T, text: impl FnOnce() -> String) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
            s.push('\n');
            s
        }
        Format::Text => text(),
    }
}

/// Seeds from the configuration, bounds from the presentation's options
/// overridden by the configuration.
pub fn zhu_presentation(config: &RunConfig, p: &Presentation) -> ZhuPresentation {
    let engine = p.engine(config.strategy);
    let mut bounds = ClosureBounds::from_options(&p.options);
    if let Some(d) = config.bounds.mode_depth {
        bounds.max_mode_depth = d;
    }
    if let Some(b) = config.bounds.membership {
        bounds.membership_degree_bound = b;
    }
    let seeds = collect_seeds(p, &engine, config.seeds, config.parallelism);
    log::info!("closure over {} seeds", seeds.len());
    relation_closure(&engine, &p.name, &seeds, &bounds, config.parallelism)
}

/// Runs one subcommand. Nothing is written; see [`run_and_write`].
pub fn run(config: &RunConfig) -> RunOutcome {
    let b = config.bounds;
    if [b.mode_depth, b.membership, b.quotient].contains(&Some(0)) {
        return RunOutcome::fail(EXIT_PARSE, "bounds must be positive".into());
    }
    let path = config.input.display().to_string();
    let src = match std::fs::read_to_string(&config.input) {
        Ok(s) => s,
        Err(e) => return RunOutcome::fail(EXIT_PARSE, format!("{path}: {e}")),
    };
    let p = match parse_presentation(&src) {
        Ok(p) => p,
        Err(e) => return RunOutcome::fail(EXIT_PARSE, format!("{path}: {e}")),
    };
    let report = validate(&p);
    let problems = || {
        report
            .issues
            .iter()
            .map(|i| format!("{path}: {}: {}", i.location, i.message))
            .collect::<Vec<_>>()
            .join("\n")
    };
    let fmt = config.format;

    if config.subcommand == Subcommand::Validate {
        let doc = render(fmt, &report, || {
            if report.is_valid() {
                format!("{}: valid\n", p.name)
            } else {
                problems() + "\n"
            }
        });
        return RunOutcome {
            exit: if report.is_valid() { EXIT_OK } else { EXIT_INVALID },
            document: Some(doc),
            message: (!report.is_valid()).then(problems),
        };
    }
    if !report.is_valid() {
        return RunOutcome::fail(EXIT_INVALID, problems());
    }

    let sig = p.signature();
    let (document, exit) = match &config.subcommand {
        Subcommand::Validate => unreachable!("handled above"),
        Subcommand::Complete => {
            let doc = complete_table(&p).to_doc(sig);
            let out = render(fmt, &doc, || {
                doc.entries
                    .iter()
                    .map(|e| format!("{}_{} {} = {}\n", e.left, e.k, e.right, e.text))
                    .collect()
            });
            (out, EXIT_OK)
        }
        Subcommand::Nf(expr) => {
            let s = match parse_state(sig, expr) {
                Ok(s) => s,
                Err(e) => return RunOutcome::fail(EXIT_PARSE, format!("nf argument: {e}")),
            };
            let nf = p.engine(config.strategy).normal_form(&s);
            let doc = NormalFormDoc {
                input: expr.clone(),
                value: state_to_doc(sig, &nf),
                text: sig.display_state(&nf),
            };
            (render(fmt, &doc, || doc.text.clone() + "\n"), EXIT_OK)
        }
        Subcommand::Singular => {
            let defects = p.engine(config.strategy).c1_singular_elements(config.parallelism);
            let doc = SingularReport::new(&p.name, sig, &defects);
            (render(fmt, &doc, || doc.to_text()), EXIT_OK)
        }
        Subcommand::Zhu => {
            let zp = zhu_presentation(config, &p);
            let exit = if zp.is_complete() { EXIT_OK } else { EXIT_PARTIAL };
            (render(fmt, &zp.to_doc(), || zp.to_text()), exit)
        }
        Subcommand::Quotient => {
            let zp = zhu_presentation(config, &p);
            let bound = b
                .quotient
                .or(p.options.quotient_degree_bound)
                .unwrap_or(DEFAULT_QUOTIENT_BOUND);
            let outcome = quotient_basis(&zp, bound as i64);
            let exit = if outcome.is_ok() && zp.is_complete() { EXIT_OK } else { EXIT_PARTIAL };
            let doc = QuotientDoc::new(&zp, &outcome);
            (render(fmt, &doc, || doc.to_text()), exit)
        }
    };
    RunOutcome {
        exit,
        document: Some(document),
        message: None,
    }
}

/// Runs and writes the document to the configured output or stdout.
pub fn run_and_write(config: &RunConfig) -> RunOutcome {
    use std::io::Write as _;
    let mut outcome = run(config);
    if let Some(doc) = &outcome.document {
        let written = match &config.output {
            Some(path) => std::fs::write(path, doc).map_err(|e| format!("{}: {e}", path.display())),
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout
                    .write_all(doc.as_bytes())
                    .and_then(|_| stdout.flush())
                    .map_err(|e| format!("stdout: {e}"))
            }
        };
        if let Err(e) = written {
            outcome.exit = EXIT_PARSE;
            outcome.message = Some(e);
        }
    }
    outcome
}

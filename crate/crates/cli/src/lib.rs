//! The `qratsim` command line.
//!
//! Exit codes: 0 verified or translated, 1 invalid proof, 2 blocked,
//! 3 parse or usage error. Each command prints one `RESULT:` line on stdout;
//! everything else goes to stderr.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use log::info;

use qratsim::expansion::{
    check_expansion_proof, emit_expansion_proof, generate_expres_refutation, parse_expansion_proof, Verdict,
    DEFAULT_EXPANSION_BOUND,
};
use qratsim::families::{gen_phi, gen_phi_proof, gen_psi0};
use qratsim::qdimacs::{emit_qdimacs, parse_qdimacs};
use qratsim::qrat::{check_qrat_proof, emit_map, emit_qrat, parse_map, parse_qrat, MapEntry, QratVerdict};
use qratsim::simulation::{translate_expres_to_qrat, translate_ircalc_to_qrat, TranslateError, TranslationOutcome};
use qratsim::{Calculus, ExpansionProof, Qbf, Var};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_BLOCKED: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "qratsim", version, about = "Check and translate QBF refutations")]
pub struct Cli {
    /// Log more (-v info, -vv debug, -vvv trace).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write bundled formulas and proofs.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Check a proof against a formula.
    Check(CheckArgs),
    /// Translate an expansion proof into a QRAT proof.
    Translate(TranslateArgs),
    /// Look for a resolution path between the two literals of a universal.
    Paths(PathsArgs),
}

#[derive(Debug, Subcommand)]
pub enum GenCommand {
    /// The counter-example family, written as phi<n>.qdimacs (+ phi<n>.irp).
    Phi {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        proof: bool,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// The worked example, written as psi0.qdimacs (+ psi0.irp).
    Psi0 {
        #[arg(long)]
        proof: bool,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// A brute-force ∀Exp+Res refutation of a small false formula.
    Expres {
        qbf: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long, default_value_t = DEFAULT_EXPANSION_BOUND)]
        bound: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProofKind {
    Ircalc,
    Expres,
    Qrat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SourceCalculus {
    Ircalc,
    Expres,
}

impl SourceCalculus {
    fn calculus(self) -> Calculus {
        match self {
            SourceCalculus::Ircalc => Calculus::IrCalc,
            SourceCalculus::Expres => Calculus::ExpRes,
        }
    }
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    pub kind: ProofKind,
    pub qbf: PathBuf,
    pub proof: PathBuf,
    /// Sidecar map of annotated variables (QRAT only).
    #[arg(long)]
    pub map: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TranslateArgs {
    pub calculus: SourceCalculus,
    pub qbf: PathBuf,
    pub proof: PathBuf,
    #[arg(short, long)]
    pub output: PathBuf,
    #[arg(long)]
    pub map_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PathsArgs {
    pub qbf: PathBuf,
    #[arg(long)]
    pub universal: u32,
}

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

impl Io<'_> {
    fn result(&mut self, line: &str) {
        let _ = writeln!(self.out, "RESULT: {line}");
    }

    fn note(&mut self, line: &str) {
        let _ = writeln!(self.err, "{line}");
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    init_logging(cli.verbose);
    let mut io = Io { out, err };
    match dispatch(&cli.command, &mut io) {
        Ok(code) => code,
        Err(e) => {
            io.note(&format!("error: {e:#}"));
            EXIT_INPUT
        }
    }
}

fn init_logging(verbose: u8) {
    let level = match verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        2 => log::LevelFilter::Debug,
        _ => log::LevelFilter::Trace,
    };
    let _ = env_logger::Builder::new().filter_level(level).format_timestamp(None).try_init();
}

fn dispatch(command: &Command, io: &mut Io<'_>) -> anyhow::Result<i32> {
    match command {
        Command::Gen(g) => generate(g, io),
        Command::Check(a) => check(a, io),
        Command::Translate(a) => translate(a, io),
        Command::Paths(a) => paths(a, io),
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn write(path: &Path, text: &str, io: &mut Io<'_>) -> anyhow::Result<()> {
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))?;
    io.note(&format!("wrote {}", path.display()));
    Ok(())
}

fn load_qbf(path: &Path) -> anyhow::Result<Qbf> {
    parse_qdimacs(&read(path)?).with_context(|| format!("{}", path.display()))
}

fn load_expansion(path: &Path, expected: Calculus) -> anyhow::Result<ExpansionProof> {
    let p = parse_expansion_proof(&read(path)?).with_context(|| format!("{}", path.display()))?;
    if p.calculus != expected {
        bail!("{}: proof is written in {}, expected {}", path.display(), p.calculus.name(), expected.name());
    }
    Ok(p)
}

fn generate(g: &GenCommand, io: &mut Io<'_>) -> anyhow::Result<i32> {
    match g {
        GenCommand::Phi { n, proof, out_dir } => {
            let f = gen_phi(*n)?;
            write(&out_dir.join(format!("phi{n}.qdimacs")), &emit_qdimacs(&f), io)?;
            if *proof {
                let p = gen_phi_proof(*n)?;
                write(&out_dir.join(format!("phi{n}.irp")), &emit_expansion_proof(&p, &f.prefix), io)?;
            }
        }
        GenCommand::Psi0 { proof, out_dir } => {
            let inst = gen_psi0();
            write(&out_dir.join("psi0.qdimacs"), &emit_qdimacs(&inst.formula), io)?;
            if let (true, Some(p)) = (*proof, &inst.proof) {
                write(&out_dir.join("psi0.irp"), &emit_expansion_proof(p, &inst.formula.prefix), io)?;
            }
        }
        GenCommand::Expres { qbf, output, bound } => {
            let f = load_qbf(qbf)?;
            let p = generate_expres_refutation(&f, *bound)?;
            info!("refutation with {} steps, {} axioms", p.steps.len(), p.axiom_count());
            write(output, &emit_expansion_proof(&p, &f.prefix), io)?;
        }
    }
    io.result("GENERATED");
    Ok(EXIT_OK)
}

fn check(a: &CheckArgs, io: &mut Io<'_>) -> anyhow::Result<i32> {
    let f = load_qbf(&a.qbf)?;
    let calculus = match a.kind {
        ProofKind::Qrat => return check_qrat(a, &f, io),
        ProofKind::Ircalc => Calculus::IrCalc,
        ProofKind::Expres => Calculus::ExpRes,
    };
    if a.map.is_some() {
        bail!("--map only applies to QRAT proofs");
    }
    let p = load_expansion(&a.proof, calculus)?;
    match check_expansion_proof(&f, &p) {
        Verdict::Valid { refutation: true } => {
            io.result("VERIFIED");
            Ok(EXIT_OK)
        }
        Verdict::Valid { refutation: false } => {
            io.result("VERIFIED derivation");
            Ok(EXIT_OK)
        }
        Verdict::Invalid { step, reason } => {
            io.result(&format!("INVALID step={step}"));
            io.note(&reason);
            Ok(EXIT_INVALID)
        }
    }
}

/// Rejects map files that could not describe interned variables of `f`.
fn validate_map(f: &Qbf, entries: &[MapEntry]) -> anyhow::Result<()> {
    let mut fresh = BTreeSet::new();
    let mut keys = BTreeSet::new();
    for e in entries {
        if f.prefix.is_declared(e.fresh) || e.fresh.0 <= f.num_vars {
            bail!("map entry {} reuses an input variable", e.fresh);
        }
        if !fresh.insert(e.fresh) {
            bail!("map entry {} appears twice", e.fresh);
        }
        if !f.prefix.is_existential(e.base) {
            bail!("map entry {}: base {} is not an existential input variable", e.fresh, e.base);
        }
        let ann = e.annotation();
        if ann.is_empty() || ann.len() != e.annotation.len() {
            bail!("map entry {}: annotation must be non-empty without repeated variables", e.fresh);
        }
        if let Some((u, _)) =
            ann.iter().find(|&(u, _)| !(f.prefix.is_universal(u) && f.prefix.strictly_left_of(u, e.base)))
        {
            bail!("map entry {}: {} is not a universal left of {}", e.fresh, u, e.base);
        }
        if !keys.insert((e.base, e.annotation.clone())) {
            bail!("map entry {}: annotated variable listed twice", e.fresh);
        }
    }
    Ok(())
}

fn check_qrat(a: &CheckArgs, f: &Qbf, io: &mut Io<'_>) -> anyhow::Result<i32> {
    let p = parse_qrat(&read(&a.proof)?).with_context(|| format!("{}", a.proof.display()))?;
    if let Some(path) = &a.map {
        let entries = parse_map(&read(path)?).with_context(|| format!("{}", path.display()))?;
        validate_map(f, &entries).with_context(|| format!("{}", path.display()))?;
        info!("map lists {} annotated variables", entries.len());
    }
    match check_qrat_proof(f, &p) {
        QratVerdict::VerifiedRefutation => {
            io.result("VERIFIED");
            Ok(EXIT_OK)
        }
        QratVerdict::VerifiedDerivation => {
            io.result("VERIFIED derivation");
            Ok(EXIT_OK)
        }
        QratVerdict::Invalid { step, rule, message } => {
            io.result(&format!("INVALID step={step} rule={rule}"));
            io.note(&message);
            Ok(EXIT_INVALID)
        }
    }
}

fn translate(a: &TranslateArgs, io: &mut Io<'_>) -> anyhow::Result<i32> {
    let f = load_qbf(&a.qbf)?;
    let p = load_expansion(&a.proof, a.calculus.calculus())?;
    let translated = match a.calculus {
        SourceCalculus::Expres => {
            translate_expres_to_qrat(&f, &p).map(|t| (TranslationOutcome::Success { proof: t.proof }, t.map, None))
        }
        SourceCalculus::Ircalc => translate_ircalc_to_qrat(&f, &p).map(|t| (t.outcome, t.map, Some(t.path_matrix))),
    };
    let (outcome, map, path_matrix) = match translated {
        Ok(t) => t,
        Err(TranslateError::InvalidProof { reason, .. }) => {
            io.result("INVALID input proof");
            io.note(&reason);
            return Ok(EXIT_INVALID);
        }
        Err(e) => {
            io.result("ERROR");
            io.note(&format!("{e}"));
            return Ok(EXIT_INVALID);
        }
    };
    match outcome {
        TranslationOutcome::Success { proof } => {
            write(&a.output, &emit_qrat(&proof), io)?;
            if let Some(path) = &a.map_out {
                write(path, &emit_map(&map), io)?;
            }
            io.result("SUCCESS");
            Ok(EXIT_OK)
        }
        TranslationOutcome::Blocked { universal, witness, .. } => {
            let path_matrix = path_matrix.expect("only IR-calc translations block");
            io.result(&format!("BLOCKED u={universal}"));
            let _ = writeln!(io.out, "path: {}", witness.labels(&path_matrix));
            Ok(EXIT_BLOCKED)
        }
    }
}

fn paths(a: &PathsArgs, io: &mut Io<'_>) -> anyhow::Result<i32> {
    let f = load_qbf(&a.qbf)?;
    let u = Var(a.universal);
    if !f.prefix.is_universal(u) {
        bail!("{u} is not a universal variable of {}", a.qbf.display());
    }
    match qratsim::dependency::find_blocking_path(&f, u)? {
        Some(path) => {
            io.result(&format!("BLOCKED u={u}"));
            let _ = writeln!(io.out, "path: {}", path.labels(&f));
            Ok(EXIT_BLOCKED)
        }
        None => {
            io.result(&format!("NO-PATH u={u}"));
            Ok(EXIT_OK)
        }
    }
}

//! Command-line driver. `run` returns the process exit code:
//! 0 success, 1 negative answer or failed learning, 2 bad input, 3 resource limit.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_xoshiro::Xoshiro256StarStar;
use rayon::prelude::*;
use serde::Serialize;

use crate::automaton::Ota;
use crate::generator::{generate_batch, random_delay_word, GenSpec, DEFAULT_DENSITY};
use crate::io::{self, IoError, StatsDocument};
use crate::learner::{learn_normal, learn_smart, LearnError, LearnResult, NormalConfig, SmartConfig};
use crate::teacher::{equivalent, Oracle};
use crate::word::{parse_word, AnyWord, WordKind, WordText};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "ota-learn", version, about = "Learn deterministic one-clock timed automata")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    Smart,
    Normal,
}

impl Mode {
    fn name(self) -> &'static str {
        match self {
            Mode::Smart => "smart",
            Mode::Normal => "normal",
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Learn a target automaton with a simulated teacher.
    Learn {
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long)]
        target: PathBuf,
        /// Answer with − instead of × when a word leaves the target.
        #[arg(long)]
        no_trick: bool,
        /// Also require evidence-closed tables (always on in smart mode).
        #[arg(long)]
        evidence_closed: bool,
        /// Hypothesis file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        stats: Option<PathBuf>,
        /// Seed of the random words used to spot-check the result.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        max_instances: Option<u64>,
    },
    /// Decide timed-language equivalence.
    Equiv {
        a: PathBuf,
        b: PathBuf,
        /// Also print both verdicts on the witness.
        #[arg(long)]
        witness: bool,
    },
    /// Run one word through an automaton.
    Member {
        file: PathBuf,
        #[arg(long)]
        word: String,
        #[arg(long)]
        kind: String,
        #[arg(long)]
        no_trick: bool,
    },
    /// Write seeded random automata plus a manifest.
    Generate {
        #[arg(long)]
        locations: usize,
        #[arg(long)]
        alphabet: usize,
        #[arg(long)]
        kappa: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, default_value_t = DEFAULT_DENSITY)]
        density: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Learn every automaton in a directory and summarize.
    Bench {
        #[arg(long)]
        dir: PathBuf,
        #[arg(long)]
        stats: PathBuf,
        #[arg(long, value_enum, default_value = "smart")]
        mode: Mode,
        #[arg(long)]
        no_trick: bool,
    },
}

enum Failure {
    Usage(String),
    Negative(String),
    Resource(String),
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<LearnError> for Failure {
    fn from(e: LearnError) -> Self {
        match e {
            LearnError::ResourceLimit(_) => Failure::Resource(e.to_string()),
            other => Failure::Negative(other.to_string()),
        }
    }
}

pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return EXIT_USAGE;
            }
            let _ = write!(out, "{}", e.render());
            return EXIT_OK;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(Failure::Usage(m)) => {
            let _ = writeln!(err, "error: {m}");
            EXIT_USAGE
        }
        Err(Failure::Negative(m)) => {
            let _ = writeln!(err, "error: {m}");
            EXIT_NEGATIVE
        }
        Err(Failure::Resource(m)) => {
            let _ = writeln!(err, "error: {m}");
            EXIT_RESOURCE
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<i32, Failure> {
    let w = |out: &mut dyn Write, s: &str| out.write_all(s.as_bytes()).map_err(|e| Failure::Negative(e.to_string()));
    match command {
        Command::Learn { mode, target, no_trick, evidence_closed, out: hyp_path, stats, seed, max_instances } => {
            let target = io::read_automaton(&target)?;
            let result = learn(&target, mode, !no_trick, evidence_closed, max_instances)?;
            spot_check(&target, &result.hypothesis, seed)?;
            let text = io::automaton_to_json(&result.hypothesis);
            match hyp_path {
                Some(p) => io::write(&p, &text)?,
                None => w(out, &text)?,
            }
            if let Some(p) = stats {
                let doc = StatsDocument::new(mode.name(), &result.stats, &result.hypothesis);
                io::write(&p, &(serde_json::to_string_pretty(&doc).expect("serializable") + "\n"))?;
            }
            Ok(EXIT_OK)
        }
        Command::Equiv { a, b, witness } => {
            let a = io::read_automaton(&a)?;
            let b = io::read_automaton(&b)?;
            if !a.alphabet().same_symbols(b.alphabet()) {
                return Err(Failure::Usage("automata use different alphabets".into()));
            }
            match equivalent(&a, &b).map_err(|e| Failure::Usage(e.to_string()))? {
                None => {
                    w(out, "equivalent\n")?;
                    Ok(EXIT_OK)
                }
                Some(word) => {
                    let mut line = word.to_text(a.alphabet());
                    if line.is_empty() {
                        line.push('ε');
                    }
                    if witness {
                        let b = b.with_alphabet(a.alphabet()).expect("same symbols");
                        let va = a.complete().expect("valid").run_delay(&word, false).1;
                        let vb = b.complete().expect("valid").run_delay(&word, false).1;
                        line = format!("{line} {va} {vb}");
                    }
                    w(out, &(line + "\n"))?;
                    Ok(EXIT_NEGATIVE)
                }
            }
        }
        Command::Member { file, word, kind, no_trick } => {
            let a = io::read_automaton(&file)?;
            let kind: WordKind = kind.parse().map_err(Failure::Usage)?;
            let word = parse_word(&word, kind, a.alphabet()).map_err(|e| Failure::Usage(e.to_string()))?;
            let v = membership(&a, &word, !no_trick);
            w(out, &format!("{v}\n"))?;
            Ok(EXIT_OK)
        }
        Command::Generate { locations, alphabet, kappa, seed, count, density, out: dir } => {
            if locations == 0 || alphabet == 0 || !(density > 0.0 && density <= 3.0) {
                return Err(Failure::Usage("need at least one location, one action and a density in (0, 3]".into()));
            }
            std::fs::create_dir_all(&dir).map_err(|e| Failure::Usage(format!("{}: {e}", dir.display())))?;
            let spec = GenSpec { locations, alphabet, kappa, seed, density };
            let mut manifest = Vec::new();
            for (s, a) in generate_batch(&spec, count) {
                let name = format!("{}_{}.json", s.group(), s.seed);
                io::write_automaton(&dir.join(&name), &a)?;
                manifest.push(ManifestEntry { file: name, locations, alphabet, kappa, seed: s.seed, density });
            }
            io::write(&dir.join("manifest.json"), &(serde_json::to_string_pretty(&manifest).expect("serializable") + "\n"))?;
            Ok(EXIT_OK)
        }
        Command::Bench { dir, stats, mode, no_trick } => bench(&dir, &stats, mode, !no_trick, out),
    }
}

fn learn(target: &Ota, mode: Mode, trick: bool, evidence_closed: bool, max_instances: Option<u64>) -> Result<LearnResult, LearnError> {
    let mut oracle = Oracle::new(target, trick)?;
    match mode {
        Mode::Smart => learn_smart(&mut oracle, target.alphabet(), &SmartConfig::default()),
        Mode::Normal => {
            let mut config = NormalConfig { trick, evidence_closed, ..NormalConfig::default() };
            if let Some(m) = max_instances {
                config.max_explored = m;
            }
            learn_normal(&mut oracle, target.alphabet(), &config)
        }
    }
}

/// Compare hypothesis and target on 1000 random delay words.
fn spot_check(target: &Ota, hypothesis: &Ota, seed: u64) -> Result<(), Failure> {
    let t = target.complete().map_err(|e| Failure::Negative(e.to_string()))?;
    let mut rng = Xoshiro256StarStar::seed_from_u64(seed);
    for _ in 0..1000 {
        let word = random_delay_word(&mut rng, t.alphabet(), 8, t.max_constant());
        if t.run_delay(&word, false).1.is_accept() != hypothesis.run_delay(&word, false).1.is_accept() {
            return Err(Failure::Negative(format!("hypothesis disagrees with the target on {}", word.to_text(t.alphabet()))));
        }
    }
    Ok(())
}

/// Verdict of a word of any kind. Reset-annotated words are rejected when
/// their resets differ from the ones the automaton takes.
pub fn membership(a: &Ota, word: &AnyWord, trick: bool) -> crate::automaton::Verdict {
    use crate::automaton::Verdict;
    match word {
        AnyWord::Delay(w) => a.run_delay(w, trick).1,
        AnyWord::Logical(w) => a.run_logical(w, trick).1,
        AnyWord::ResetDelay(w) => {
            let (r, v) = a.run_delay(&w.delay_word(), trick);
            if r.resets() == w.resets() || v == Verdict::Invalid {
                v
            } else {
                Verdict::Reject
            }
        }
        AnyWord::ResetLogical(w) => {
            let (r, v) = a.run_logical(&w.logical_word(), trick);
            if r.resets() == w.resets() || v == Verdict::Invalid {
                v
            } else {
                Verdict::Reject
            }
        }
    }
}

#[derive(Serialize)]
struct ManifestEntry {
    file: String,
    locations: usize,
    alphabet: usize,
    kappa: u64,
    seed: u64,
    density: f64,
}

#[derive(Serialize)]
struct BenchRun {
    file: String,
    learned: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
    #[serde(flatten, skip_serializing_if = "Option::is_none")]
    stats: Option<StatsDocument>,
}

#[derive(Serialize)]
struct BenchSummary {
    mode: String,
    runs: Vec<BenchRun>,
    learned: usize,
    total: usize,
    mean_membership: f64,
    mean_equivalence: f64,
    mean_locations: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    mean_explored: Option<f64>,
}

fn bench(dir: &Path, stats_path: &Path, mode: Mode, trick: bool, out: &mut dyn Write) -> Result<i32, Failure> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| Failure::Usage(format!("{}: {e}", dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json") && p.file_name().is_some_and(|n| n != "manifest.json"))
        .collect();
    files.sort();
    let targets = files.iter().map(|p| io::read_automaton(p).map(|a| (p, a))).collect::<Result<Vec<_>, _>>()?;
    let outcomes: Vec<(BenchRun, bool)> = targets
        .par_iter()
        .map(|(path, target)| {
            let file = path.file_name().unwrap().to_string_lossy().into_owned();
            match learn(target, mode, trick, false, None) {
                Ok(r) => {
                    let ok = matches!(equivalent(target, &r.hypothesis), Ok(None));
                    let stats = StatsDocument::new(mode.name(), &r.stats, &r.hypothesis);
                    (BenchRun { file, learned: ok, error: None, stats: Some(stats) }, false)
                }
                Err(e) => {
                    let limit = matches!(e, LearnError::ResourceLimit(_));
                    (BenchRun { file, learned: false, error: Some(e.to_string()), stats: None }, limit)
                }
            }
        })
        .collect();
    let limited = outcomes.iter().any(|(_, l)| *l);
    let runs: Vec<BenchRun> = outcomes.into_iter().map(|(r, _)| r).collect();
    let done: Vec<&StatsDocument> = runs.iter().filter_map(|r| r.stats.as_ref()).collect();
    let mean = |f: &dyn Fn(&StatsDocument) -> f64| if done.is_empty() { 0.0 } else { done.iter().map(|s| f(s)).sum::<f64>() / done.len() as f64 };
    let summary = BenchSummary {
        mode: mode.name().into(),
        learned: runs.iter().filter(|r| r.learned).count(),
        total: runs.len(),
        mean_membership: mean(&|s| s.membership_count as f64),
        mean_equivalence: mean(&|s| s.equivalence_count as f64),
        mean_locations: mean(&|s| s.locations_learned as f64),
        mean_explored: matches!(mode, Mode::Normal).then(|| mean(&|s| s.explored_instances.unwrap_or(0) as f64)),
        runs,
    };
    io::write(stats_path, &(serde_json::to_string_pretty(&summary).expect("serializable") + "\n"))?;
    let _ = writeln!(out, "{}/{} learned", summary.learned, summary.total);
    Ok(if limited {
        EXIT_RESOURCE
    } else if summary.learned == summary.total {
        EXIT_OK
    } else {
        EXIT_NEGATIVE
    })
}

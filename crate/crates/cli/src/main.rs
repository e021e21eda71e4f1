//! `wfl`: word maps on finite groups from the command line.
//!
//! Every invocation prints one JSON document
//! `{schema_version, request, result, status, stats}` and exits with
//! 0 (success or pass), 1 (a check failed), 2 (usage error) or
//! 3 (a size cap or evaluation budget was exceeded).

mod battery;
mod cache;
mod commands;
mod output;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};
use wfl_core::Limits;

use output::{envelope, render, status_of, Reply, Status};

#[derive(Parser, Debug)]
#[command(name = "wfl", version, about = "Automorphic word maps on finite groups")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "WFL_THREADS")]
    threads: Option<usize>,
    /// Maximum word evaluations per search.
    #[arg(long, global = true, env = "WFL_BUDGET")]
    budget: Option<u64>,
    /// Directory holding the result cache; caching is off when unset.
    #[arg(long, global = true, env = "WFL_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
    /// Ignore the cache even when a directory is configured.
    #[arg(long, global = true)]
    no_cache: bool,
    /// Largest group order to construct.
    #[arg(long, global = true)]
    order_cap: Option<usize>,
    /// Largest group order whose automorphism group is enumerated.
    #[arg(long, global = true)]
    aut_order_cap: Option<usize>,
    /// Largest automorphism set kept in memory.
    #[arg(long, global = true)]
    autset_cap: Option<usize>,
    /// Largest group order for subgroup enumeration.
    #[arg(long, global = true)]
    subgroup_cap: Option<usize>,
}

impl Global {
    fn limits(&self) -> Limits {
        let mut l = Limits::default();
        if let Some(b) = self.budget {
            l.budget = b;
        }
        if let Some(c) = self.order_cap {
            l.order_cap = c;
        }
        if let Some(c) = self.aut_order_cap {
            l.aut_order_cap = c;
        }
        if let Some(c) = self.autset_cap {
            l.autset_cap = c;
        }
        if let Some(c) = self.subgroup_cap {
            l.subgroup_cap = c;
        }
        l
    }
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Command {
    /// Reduced words and the constants M(d, l).
    #[command(subcommand)]
    Word(WordCmd),
    /// Finite groups, automorphisms and subgroup structure.
    #[command(subcommand)]
    Group(GroupCmd),
    /// Fiber sizes of plain and automorphic word maps.
    #[command(subcommand)]
    Fiber(FiberCmd),
    /// Exhaustive and sampled checks of the fiber inequalities.
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Exclusion thresholds and related bounds.
    #[command(subcommand)]
    Bounds(BoundsCmd),
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WordCmd {
    /// Parse, reduce and normalise a word.
    Parse {
        #[arg(long, short)]
        word: String,
    },
    /// List the variations of a word.
    Variations {
        #[arg(long, short)]
        word: String,
        /// List at most this many.
        #[arg(long, default_value_t = 10_000)]
        limit: usize,
    },
    /// M(d, l) = ((2l(d+1))^(2l+3) - 1) / (2l(d+1) - 1).
    Mconst {
        #[arg(short)]
        d: u64,
        #[arg(short)]
        l: u64,
    },
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GroupCmd {
    /// Build a group and report basic invariants.
    Make {
        #[arg(long, short)]
        group: String,
        /// Include the Cayley table.
        #[arg(long)]
        table: bool,
    },
    /// Automorphism sets.
    Auts {
        #[arg(long, short)]
        group: String,
        /// id, inn or aut.
        #[arg(long, default_value = "aut")]
        set: String,
        /// Include every automorphism, not only generators.
        #[arg(long)]
        list: bool,
    },
    /// Subgroups with normal and characteristic flags.
    Subgroups {
        #[arg(long, short)]
        group: String,
        /// all, normal or characteristic.
        #[arg(long, default_value = "all")]
        kind: String,
    },
    /// A maximal characteristic series and its factors.
    Series {
        #[arg(long, short)]
        group: String,
    },
    /// The solvable radical.
    Radical {
        #[arg(long, short)]
        group: String,
    },
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FiberCmd {
    /// Fiber sizes of one automorphic word map.
    Dist {
        #[arg(long, short)]
        group: String,
        #[arg(long, short)]
        word: String,
        /// Automorphism set the tuple indexes into: id, inn or aut.
        #[arg(long, default_value = "id")]
        auts: String,
        /// Comma-separated indices into the set, one per letter
        /// (default: identity everywhere).
        #[arg(long)]
        tuple: Option<String>,
    },
    /// Largest fiber of the plain word map.
    Pi {
        #[arg(long, short)]
        group: String,
        #[arg(long, short)]
        word: String,
    },
    /// Largest fiber over automorphic word maps.
    Max {
        #[arg(long, short)]
        group: String,
        #[arg(long, short)]
        word: String,
        /// id, inn, aut or auto.
        #[arg(long, default_value = "auto")]
        auts: String,
        /// any, or an element index.
        #[arg(long, default_value = "any")]
        target: String,
        /// exact or sample.
        #[arg(long, default_value = "exact")]
        mode: String,
        #[arg(long, default_value_t = 1000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerifyCmd {
    /// The identity has a largest fiber over the automorphism set.
    IdentityMax {
        #[arg(long, short)]
        group: String,
        #[arg(long, short)]
        word: String,
        #[arg(long, default_value = "auto")]
        auts: String,
    },
    /// Fiber bounds through a characteristic subgroup and its quotient.
    Submult {
        #[arg(long, short)]
        group: String,
        /// trivial, whole, center, derived, order:k or gens:i,j.
        #[arg(long, short)]
        subgroup: String,
        #[arg(long, short)]
        word: String,
        #[arg(long, default_value = "auto")]
        auts: String,
    },
    /// Squares in dihedral groups break plain submultiplicativity.
    Dihedral {
        #[arg(long)]
        o: usize,
    },
    /// Seeded random coset-equation rewrites, each checked exhaustively.
    Rewrite {
        #[arg(long, short)]
        group: String,
        #[arg(long, short)]
        subgroup: String,
        #[arg(long, short)]
        word: String,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// p_w(S^n) against the variation bound.
    VariationBound {
        #[arg(long, short)]
        group: String,
        #[arg(long, short)]
        n: usize,
        #[arg(long, short)]
        word: String,
        #[arg(long, default_value_t = 1000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Use the floor of n/l^2 in the exponent.
        #[arg(long)]
        floor: bool,
        /// Multiply epsilon by this rational before comparing.
        #[arg(long)]
        epsilon_scale: Option<String>,
    },
    /// Run a manifest of checks and write one report per check.
    Battery {
        /// JSON list of check specs (default: the shipped battery).
        #[arg(long)]
        manifest: Option<PathBuf>,
        /// Directory for per-check reports.
        #[arg(long, default_value = "battery-reports")]
        out: PathBuf,
    },
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundsCmd {
    /// Which composition factors a large fiber rules out.
    Exclude {
        #[arg(long, short)]
        word: String,
        #[arg(long, default_value = "1")]
        rho: String,
    },
    /// Alternating-group threshold.
    Alt {
        #[arg(long, short)]
        word: String,
        #[arg(long, default_value = "1")]
        rho: String,
    },
    /// Lie rank threshold.
    Lie {
        #[arg(long, short)]
        word: String,
        #[arg(long, default_value = "1")]
        rho: String,
    },
    /// n0 = floor(l^2 ln rho / ln(1 - 1/|S|^l)).
    N0 {
        #[arg(long, short)]
        word: String,
        #[arg(long)]
        rho: String,
        /// |S|, at least 60.
        #[arg(long, short)]
        s: String,
    },
    /// Product of |Aut S|^n0 n0! over a list of simple groups.
    RadicalBound {
        #[arg(long, short)]
        word: String,
        #[arg(long)]
        rho: String,
        /// Comma-separated |S|:|Aut S| pairs, e.g. 60:120,168:336.
        #[arg(long, default_value = "")]
        factors: String,
        #[arg(long)]
        n0_cap: String,
        #[arg(long)]
        eta0: String,
    },
}

fn request_of(cmd: &Command) -> Value {
    let v = serde_json::to_value(cmd).expect("commands serialize");
    // {"group": {"make": {...}}} -> command "group make"
    let (top, inner) = v.as_object().and_then(|m| m.iter().next()).expect("one command");
    let (sub, params) = match inner {
        Value::Object(m) => m.iter().next().map(|(k, v)| (k.clone(), v.clone())).expect("one subcommand"),
        Value::String(s) => (s.clone(), json!({})),
        _ => unreachable!("subcommands serialize as objects or strings"),
    };
    json!({ "command": format!("{top} {sub}"), "params": params })
}

fn cacheable(cmd: &Command) -> bool {
    !matches!(cmd, Command::Verify(VerifyCmd::Battery { .. }))
}

fn usage_failure(message: String) -> i32 {
    let reply = Reply {
        result: json!({ "error": message }),
        status: Status::UsageError,
        stats: json!({}),
    };
    print!("{}", render(&envelope(&json!({ "command": null, "params": {} }), &reply)));
    Status::UsageError.exit_code()
}

fn real_main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return 0;
            }
            return usage_failure(e.to_string());
        }
    };
    if let Some(n) = cli.global.threads {
        if n == 0 {
            return usage_failure("--threads must be at least 1".into());
        }
        if rayon::ThreadPoolBuilder::new().num_threads(n).build_global().is_err() {
            eprintln!("warning: thread pool already initialised");
        }
    }
    let limits = cli.global.limits();
    let request = request_of(&cli.command);
    let cache = match (&cli.global.cache_dir, cli.global.no_cache, cacheable(&cli.command)) {
        (Some(dir), false, true) => match cache::Cache::open(dir) {
            Ok(c) => Some(c),
            Err(e) => {
                eprintln!("warning: cache disabled: {e}");
                None
            }
        },
        _ => None,
    };
    let key = cache::digest(&request);
    if let Some(c) = &cache {
        if let Some(doc) = c.get(&key) {
            if let Some(status) = status_of(&doc) {
                eprintln!("cache hit {key}");
                print!("{}", render(&doc));
                return status.exit_code();
            }
        }
    }
    let reply = match &cli.command {
        Command::Word(c) => commands::word(c),
        Command::Group(c) => commands::group(c, &limits),
        Command::Fiber(c) => commands::fiber(c, &limits),
        Command::Verify(VerifyCmd::Battery { manifest, out }) => {
            battery::run(manifest.as_deref(), out, &limits)
        }
        Command::Verify(c) => commands::verify(c, &limits),
        Command::Bounds(c) => commands::bounds(c),
    }
    .unwrap_or_else(|e| Reply::error(&e));
    let doc = envelope(&request, &reply);
    if let Some(c) = &cache {
        if !matches!(reply.status, Status::UsageError | Status::LimitExceeded) {
            if let Err(e) = c.put(&key, &request, &doc) {
                eprintln!("warning: cache write failed: {e}");
            }
        }
    }
    print!("{}", render(&doc));
    reply.status.exit_code()
}

fn main() {
    std::process::exit(real_main());
}

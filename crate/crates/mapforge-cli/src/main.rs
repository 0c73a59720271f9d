//! mapforge: seeded experiments on random planar structures.
//!
//! Subcommands: sample | scaling | tail | core | validate | series.
//! Exit codes: 0 ok, 2 validation failure, 3 wall budget exceeded,
//! 1 anything else.

use mapforge_cli::config::{Budget, DiameterMode, ExperimentConfig, OutputFormat};
use mapforge_cli::runners::{self, HarnessError, ScalingFamily, TailStatistic};

const USAGE: &str = "\
mapforge <subcommand> [flags]

subcommands:
  sample   --kind {tree|quad|map} --n N [--seed S] [--out DIR]
  scaling  --family {quad-radius|map-diameter|tree-height|tree-span|tree-diameter}
           --grid N1,N2,... --reps R [--seed S] [--x Q] [--threads T]
           [--exact|--bounds] [--out DIR] [--format {csv|json}]
  tail     --stat {root-face-degree|max-face-degree|label-span-excess}
           --n N --reps R [--seed S] [--out DIR]
  core     --grid N1,N2,... --reps R [--x Q] [--seed S] [--out DIR]
  validate --n N --reps R [--seed S] [--out DIR]
  series   --system NAME --order K [--x Q] [--table FILE] [--out DIR]

common flags: --seed (default 1), --threads (default 1), --out (default out),
--format csv|json (default csv), --x rational like 1, 3/2 (default 1).
The MAPFORGE_BUDGET_SECS environment variable caps wall time (exit 3).
";

struct Args {
    map: std::collections::HashMap<String, String>,
    flags: std::collections::HashSet<String>,
}

fn parse_args(argv: &[String]) -> Result<Args, String> {
    let mut map = std::collections::HashMap::new();
    let mut flags = std::collections::HashSet::new();
    let mut i = 0;
    while i < argv.len() {
        let a = &argv[i];
        if let Some(name) = a.strip_prefix("--") {
            if matches!(name, "exact" | "bounds") {
                flags.insert(name.to_string());
                i += 1;
            } else {
                let v = argv
                    .get(i + 1)
                    .ok_or_else(|| format!("flag --{name} needs a value"))?;
                map.insert(name.to_string(), v.clone());
                i += 2;
            }
        } else {
            return Err(format!("unexpected argument '{a}'"));
        }
    }
    Ok(Args { map, flags })
}

impl Args {
    fn get(&self, k: &str) -> Option<&str> {
        self.map.get(k).map(|s| s.as_str())
    }

    fn require(&self, k: &str) -> Result<&str, String> {
        self.get(k).ok_or_else(|| format!("missing --{k}"))
    }

    fn parse_usize(&self, k: &str, default: usize) -> Result<usize, String> {
        match self.get(k) {
            None => Ok(default),
            Some(v) => parse_count(v).map_err(|e| format!("--{k}: {e}")),
        }
    }
}

/// Counts accept plain integers and `2^k` powers.
fn parse_count(tok: &str) -> Result<usize, String> {
    if let Some((base, exp)) = tok.split_once('^') {
        let b: usize = base.trim().parse().map_err(|_| "bad base".to_string())?;
        let e: u32 = exp.trim().parse().map_err(|_| "bad exponent".to_string())?;
        return b
            .checked_pow(e)
            .ok_or_else(|| "overflow".to_string());
    }
    tok.trim().parse().map_err(|_| format!("bad count '{tok}'"))
}

fn build_config(name: &str, args: &Args) -> Result<ExperimentConfig, String> {
    let mut cfg = ExperimentConfig::new(name);
    if let Some(grid) = args.get("grid") {
        cfg.grid = grid
            .split(',')
            .map(parse_count)
            .collect::<Result<Vec<_>, _>>()?;
    }
    if let Some(n) = args.get("n") {
        cfg.grid = vec![parse_count(n)?];
    }
    cfg.reps = args.parse_usize("reps", cfg.reps)?;
    cfg.seed = args
        .get("seed")
        .map(|s| s.parse::<u64>().map_err(|_| "bad --seed".to_string()))
        .transpose()?
        .unwrap_or(1);
    cfg.threads = args.parse_usize("threads", 1)?;
    if let Some(out) = args.get("out") {
        cfg.out_dir = out.to_string();
    }
    if let Some(fmt) = args.get("format") {
        cfg.format = OutputFormat::parse(fmt)?;
    }
    if args.flags.contains("bounds") {
        cfg.diameter_mode = DiameterMode::Bounds;
    }
    if let Some(x) = args.get("x") {
        cfg = cfg.with_x(x)?;
    }
    Ok(cfg)
}

fn run() -> Result<(), HarnessError> {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let Some(sub) = argv.first() else {
        eprint!("{USAGE}");
        return Err(HarnessError::Usage("missing subcommand".into()));
    };
    let args = parse_args(&argv[1..]).map_err(HarnessError::Usage)?;
    let budget = Budget::from_env();
    match sub.as_str() {
        "sample" => {
            let kind = args.require("kind").map_err(HarnessError::Usage)?.to_string();
            let cfg = build_config(&format!("sample-{kind}"), &args)
                .map_err(HarnessError::Usage)?;
            let out = runners::run_sample(&cfg, &kind)?;
            for f in out.files {
                println!("{}", f.display());
            }
        }
        "scaling" => {
            let family = ScalingFamily::parse(args.require("family").map_err(HarnessError::Usage)?)
                .map_err(HarnessError::Usage)?;
            let cfg = build_config(&format!("scaling-{}", family.name()), &args)
                .map_err(HarnessError::Usage)?;
            let out = runners::run_scaling(&cfg, family, &budget)?;
            println!(
                "slope {} (95% CI [{}, {}])",
                out.fit.slope, out.fit.ci_lo, out.fit.ci_hi
            );
            for f in out.files {
                println!("{}", f.display());
            }
        }
        "tail" => {
            let stat = TailStatistic::parse(args.require("stat").map_err(HarnessError::Usage)?)
                .map_err(HarnessError::Usage)?;
            let cfg = build_config(&format!("tail-{}", stat.name()), &args)
                .map_err(HarnessError::Usage)?;
            let out = runners::run_tail(&cfg, stat, &budget)?;
            println!("log tail slope {}", out.log_tail_slope);
            for f in out.files {
                println!("{}", f.display());
            }
        }
        "core" => {
            let cfg = build_config("core", &args).map_err(HarnessError::Usage)?;
            let out = runners::run_core(&cfg, &budget)?;
            println!(
                "alpha_hat {} tv_distance {}",
                out.alpha_hat, out.tv_distance
            );
            for f in out.files {
                println!("{}", f.display());
            }
        }
        "validate" => {
            let cfg = build_config("validate", &args).map_err(HarnessError::Usage)?;
            let out = runners::run_validate(&cfg, &budget)?;
            println!("checked {} pipelines, zero violations", out.checked);
            for f in out.files {
                println!("{}", f.display());
            }
        }
        "series" => {
            let system = args.require("system").map_err(HarnessError::Usage)?.to_string();
            let order = args.parse_usize("order", 20).map_err(HarnessError::Usage)?;
            let cfg = build_config(&format!("series-{system}"), &args)
                .map_err(HarnessError::Usage)?;
            let out =
                runners::run_series(&cfg, &system, order, args.get("table"))?;
            for f in out.files {
                println!("{}", f.display());
            }
        }
        "help" | "--help" | "-h" => {
            print!("{USAGE}");
        }
        other => {
            eprint!("{USAGE}");
            return Err(HarnessError::Usage(format!("unknown subcommand '{other}'")));
        }
    }
    Ok(())
}

fn main() {
    match run() {
        Ok(()) => {}
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}

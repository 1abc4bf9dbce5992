use std::collections::BTreeSet;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use pwp_core::certify::{
    gap_witness, pushforward_haar, schottky_certificate, GapWitness, PingPongCertificate,
};
use pwp_core::exactnum::{parse_prime_set, parse_rational, AlgebraicReal, Rational, RingSpec};
use pwp_core::moebius::{reduce_to_gauss_domain, GaussianRational, Mat2};
use pwp_core::pwp::{breakpoint_witness, ElementDoc, PwpMap, Smoothness};
use pwp_core::surgery::{
    cut_and_paste, rational_cut_and_paste, smooth_element, thompson_generators, thompson_relators,
};

/// Exact piecewise-projective maps: construction, checking and certificates.
#[derive(Parser, Debug)]
#[command(name = "pwp", version)]
struct Cli {
    /// Write the JSON result here instead of standard output.
    #[arg(short = 'o', long = "output", global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// h∘g for `-f h -f g`.
    Compose {
        #[arg(short = 'f', long = "file", num_args = 1, required = true)]
        files: Vec<PathBuf>,
    },
    Invert {
        #[arg(short = 'f', long = "file")]
        file: PathBuf,
    },
    Eval {
        #[arg(short = 'f', long = "file")]
        file: PathBuf,
        #[arg(long)]
        at: String,
    },
    /// Checks an element, gap witness or ping-pong certificate.
    Verify {
        #[arg(short = 'f', long = "file")]
        file: PathBuf,
    },
    /// Exit status 1 when some breakpoint is only C0.
    Smoothcheck {
        #[arg(short = 'f', long = "file")]
        file: PathBuf,
    },
    Cutpaste {
        #[arg(long)]
        mat: String,
        #[arg(long)]
        at: String,
        #[arg(long)]
        ring: Option<String>,
    },
    Ratcutpaste {
        #[arg(long)]
        mat: String,
        #[arg(long)]
        at: String,
    },
    Smooth {
        #[arg(short = 'f', long = "file")]
        file: PathBuf,
    },
    Witness {
        #[arg(short = 'f', long = "file")]
        file: PathBuf,
        #[arg(long)]
        at: String,
        #[arg(long = "S")]
        s: String,
    },
    Thompson {
        #[arg(long)]
        check_relations: bool,
    },
    /// Generators default to Thompson's A and B.
    Gap {
        #[arg(long = "S")]
        s: String,
        #[arg(long = "S2")]
        s2: String,
        #[arg(short = 'f', long = "file")]
        files: Vec<PathBuf>,
    },
    Haarpush {
        #[arg(long)]
        mat: String,
        #[arg(long)]
        prime: u64,
        #[arg(long)]
        depth: u32,
    },
    /// Two `--mat` flags.
    Pingpong {
        #[arg(long, num_args = 1, required = true)]
        mat: Vec<String>,
    },
    Reduce {
        #[arg(long)]
        z: String,
    },
}

enum Failure {
    /// Input could not be read or parsed.
    Malformed(String),
    /// A check or construction failed.
    Check(String),
}

type Outcome = Result<(Value, String, bool), Failure>;

fn malformed<E: ToString>(e: E) -> Failure {
    Failure::Malformed(e.to_string())
}

fn check<E: ToString>(e: E) -> Failure {
    Failure::Check(e.to_string())
}

fn read(path: &PathBuf) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| malformed(format!("{}: {e}", path.display())))
}

fn read_element(path: &PathBuf) -> Result<PwpMap<Rational>, Failure> {
    let doc: ElementDoc<Rational> = serde_json::from_str(&read(path)?).map_err(malformed)?;
    PwpMap::try_from(doc).map_err(malformed)
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn rat_mat(s: &str) -> Result<Mat2<Rational>, Failure> {
    s.parse().map_err(malformed)
}

fn real(s: &str) -> Result<AlgebraicReal, Failure> {
    s.parse().map_err(malformed)
}

fn primes(s: &str) -> Result<BTreeSet<u64>, Failure> {
    parse_prime_set(s).map_err(malformed)
}

fn run(cmd: Command) -> Outcome {
    match cmd {
        Command::Compose { files } => {
            let mut maps = files.iter().map(read_element).collect::<Result<Vec<_>, _>>()?;
            let mut acc = maps.pop().expect("at least one file");
            while let Some(h) = maps.pop() {
                acc = h.compose(&acc).map_err(check)?;
            }
            let n = acc.breakpoints().len();
            Ok((to_value(&acc), format!("composed: {n} breakpoints"), true))
        }
        Command::Invert { file } => {
            let inv = read_element(&file)?.invert().map_err(check)?;
            Ok((to_value(&inv), "inverted".into(), true))
        }
        Command::Eval { file, at } => {
            let h = read_element(&file)?;
            let x = real(&at)?;
            let y = h.eval(&x).map_err(check)?;
            let summary = format!("h({x}) = {y}");
            Ok((json!({ "x": x, "value": y }), summary, true))
        }
        Command::Verify { file } => verify(&read(&file)?),
        Command::Smoothcheck { file } => {
            let h = read_element(&file)?;
            let classes = h.smoothness().map_err(check)?;
            let c0 = classes.iter().filter(|(_, c)| *c == Smoothness::C0).count();
            let rows: Vec<Value> = classes
                .iter()
                .map(|(b, c)| json!({ "breakpoint": b, "class": c }))
                .collect();
            let summary = format!("{} breakpoints, {c0} only C0", classes.len());
            Ok((json!({ "breakpoints": rows, "c1": c0 == 0 }), summary, c0 == 0))
        }
        Command::Cutpaste { mat, at, ring } => {
            let x = real(&at)?;
            let ring: Option<RingSpec> = ring.map(|r| r.parse().map_err(malformed)).transpose()?;
            let (doc, in_ring, n_bps) = match rat_mat(&mat) {
                Ok(g) => {
                    let t = cut_and_paste(&g, &x).map_err(check)?;
                    let ok = ring.as_ref().is_none_or(|r| t.h.ring_membership(r));
                    (to_value(&t), ok, t.h.breakpoints().len())
                }
                Err(_) => {
                    let g: Mat2<AlgebraicReal> = mat.parse().map_err(malformed)?;
                    let t = cut_and_paste(&g, &x).map_err(check)?;
                    let ok = ring.as_ref().is_none_or(|r| t.h.ring_membership(r));
                    (to_value(&t), ok, t.h.breakpoints().len())
                }
            };
            let summary = format!("cut and paste: {n_bps} breakpoints, ring check {in_ring}");
            Ok((doc, summary, in_ring))
        }
        Command::Ratcutpaste { mat, at } => {
            let g = rat_mat(&mat)?;
            let x = parse_rational(&at).map_err(malformed)?;
            let t = rational_cut_and_paste(&g, &x).map_err(check)?;
            Ok((to_value(&t), "rational cut and paste".into(), true))
        }
        Command::Smooth { file } => {
            let s = smooth_element(&read_element(&file)?).map_err(check)?;
            let summary = format!("{} patches inserted", s.windows.len());
            Ok((to_value(&s), summary, true))
        }
        Command::Witness { file, at, s } => {
            let h = read_element(&file)?;
            let w = breakpoint_witness(&h, &real(&at)?, &primes(&s)?).map_err(check)?;
            let summary = format!("witness {}", w.witness);
            Ok((to_value(&w), summary, true))
        }
        Command::Thompson { check_relations } => {
            let (a, b) = thompson_generators();
            let mut doc = json!({ "A": a, "B": b });
            let mut ok = true;
            if check_relations {
                let rels = thompson_relators(&a, &b).map_err(check)?;
                ok = rels.iter().all(PwpMap::is_identity);
                doc["relationsHold"] = json!(ok);
            }
            let summary = if check_relations {
                format!("relations hold: {ok}")
            } else {
                "generators A, B".into()
            };
            Ok((doc, summary, ok))
        }
        Command::Gap { s, s2, files } => {
            let gens = if files.is_empty() {
                let (a, b) = thompson_generators();
                vec![a, b]
            } else {
                files.iter().map(read_element).collect::<Result<_, _>>()?
            };
            let w = gap_witness(&primes(&s)?, &primes(&s2)?, &gens).map_err(check)?;
            w.verify().map_err(check)?;
            Ok((to_value(&w), format!("gap witness at p = {}", w.p), true))
        }
        Command::Haarpush { mat, prime, depth } => {
            let mu = pushforward_haar(&rat_mat(&mat)?, prime, depth).map_err(check)?;
            let summary = format!("{} balls at depth {depth}", mu.masses.len());
            Ok((to_value(&mu), summary, true))
        }
        Command::Pingpong { mat } => {
            let [g1, g2] = <[String; 2]>::try_from(mat)
                .map_err(|_| malformed("pingpong takes exactly two --mat"))?;
            let c = schottky_certificate(&rat_mat(&g1)?, &rat_mat(&g2)?).map_err(check)?;
            Ok((to_value(&c), format!("ping-pong with k = {}", c.k), true))
        }
        Command::Reduce { z } => {
            let z: GaussianRational = z.parse().map_err(malformed)?;
            let (m, w) = reduce_to_gauss_domain(&z).map_err(check)?;
            let summary = format!("{z} -> {w}");
            Ok((json!({ "matrix": m, "point": w.to_string() }), summary, true))
        }
    }
}

fn verify(text: &str) -> Outcome {
    let v: Value = serde_json::from_str(text).map_err(malformed)?;
    match v.get("kind").and_then(Value::as_str) {
        Some("gap_witness") => {
            let w: GapWitness = serde_json::from_value(v).map_err(malformed)?;
            w.verify().map_err(check)?;
            Ok((json!({ "kind": "gap_witness", "verified": true }), "gap witness verified".into(), true))
        }
        Some("ping_pong") => {
            let c: PingPongCertificate = serde_json::from_value(v).map_err(malformed)?;
            c.verify().map_err(check)?;
            Ok((json!({ "kind": "ping_pong", "verified": true }), "ping-pong verified".into(), true))
        }
        Some(other) => Err(malformed(format!("unknown document kind {other:?}"))),
        None => {
            let doc: ElementDoc<Rational> = serde_json::from_value(v).map_err(malformed)?;
            let h = PwpMap::try_from(doc).map_err(check)?;
            let summary = format!("valid element with {} breakpoints", h.breakpoints().len());
            Ok((json!({ "kind": "element", "verified": true }), summary, true))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok((doc, summary, ok)) => {
            let mut text = serde_json::to_string_pretty(&doc).expect("serializable");
            text.push('\n');
            match &cli.output {
                Some(path) => {
                    if let Err(e) = fs::write(path, &text) {
                        eprintln!("error: {}: {e}", path.display());
                        return ExitCode::from(2);
                    }
                }
                None => print!("{text}"),
            }
            eprintln!("{summary}");
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Malformed(msg)) => {
            eprintln!("malformed input: {msg}");
            ExitCode::from(2)
        }
    }
}

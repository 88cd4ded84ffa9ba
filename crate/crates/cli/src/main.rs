//! Command-line front end: bound calculator, instance generation, column
//! and matrix reduction with certificate emission, certificate
//! verification, and a self-test property suite.
//!
//! Exit codes: 0 success, 1 verification failure, 2 search-cap failure,
//! 3 input error.

use clap::{Args, Parser, Subcommand, ValueEnum};
use orthocert::certificate::{
    certify_column, certify_matrix, parse_certificate, parse_instance, verify_certificate,
    Instance,
};
use orthocert::enumeration::SearchCfg;
use orthocert::error::Error;
use orthocert::orthocore::{OrthoIndex, Parity, Shape};
use orthocert::pipeline::{
    compute_bound, random_instance, random_matrix, InstanceCfg, Mode, PipelineCfg,
};
use orthocert::polyring::{CoeffRing, Ring};
use std::fs;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "orthocert",
    about = "Bounded reduction in split orthogonal groups over polynomial rings, with verifiable transvection-word certificates"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum RingArg {
    Fp,
    Q,
    Z,
}

#[derive(Clone, Copy, ValueEnum)]
enum ParityArg {
    Even,
    Odd,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Column,
    Matrix,
}

impl ModeArg {
    fn to_mode(self) -> Mode {
        match self {
            ModeArg::Column => Mode::Column,
            ModeArg::Matrix => Mode::Matrix,
        }
    }
}

#[derive(Args, Clone)]
struct RingOpts {
    /// Coefficient ring
    #[arg(long, value_enum, default_value = "fp")]
    ring: RingArg,
    /// Prime modulus for F_p
    #[arg(long, default_value_t = 5)]
    p: u64,
    /// Number of polynomial variables
    #[arg(long, default_value_t = 1)]
    nvars: usize,
    /// Rank r of the split orthogonal group
    #[arg(long, default_value_t = 3)]
    rank: usize,
    /// Even group O(2r) or odd O(2r+1)
    #[arg(long, value_enum, default_value = "even")]
    parity: ParityArg,
}

impl RingOpts {
    fn build(&self) -> Result<(Shape, Ring), Error> {
        let coeff = match self.ring {
            RingArg::Fp => CoeffRing::prime_field(self.p)?,
            RingArg::Q => CoeffRing::rationals(),
            RingArg::Z => CoeffRing::integers(),
        };
        let ring = Ring::new(coeff, self.nvars);
        let parity = match self.parity {
            ParityArg::Even => Parity::Even,
            ParityArg::Odd => Parity::Odd,
        };
        let shape = Shape::new(self.rank, parity);
        shape.check_ring(ring)?;
        Ok((shape, ring))
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print the explicit reduction bound N for the given parameters
    Bound {
        #[command(flatten)]
        ring: RingOpts,
        #[arg(long, value_enum, default_value = "column")]
        mode: ModeArg,
    },
    /// Generate random instances (words applied to e_1) as JSON
    Gen {
        #[command(flatten)]
        ring: RingOpts,
        #[arg(long, value_enum, default_value = "column")]
        mode: ModeArg,
        /// Length of the generating word
        #[arg(long, default_value_t = 10)]
        len: usize,
        /// Maximum degree of word parameters
        #[arg(long, default_value_t = 1)]
        degree: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of instances (seeds seed, seed+1, ...)
        #[arg(long, default_value_t = 1)]
        count: usize,
        /// Output file (stdout when absent)
        #[arg(long)]
        out: Option<String>,
    },
    /// Reduce instances and emit certificates
    Reduce {
        #[command(flatten)]
        ring: RingOpts,
        #[arg(long, value_enum, default_value = "column")]
        mode: ModeArg,
        /// Read an instance document (or array) from this file instead of
        /// generating
        #[arg(long = "in")]
        input: Option<String>,
        #[arg(long, default_value_t = 10)]
        len: usize,
        #[arg(long, default_value_t = 1)]
        degree: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        count: usize,
        /// Candidate cap for the certified searches
        #[arg(long, default_value_t = 5000)]
        cap: usize,
        /// Parallel worker threads for independent instances
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        out: Option<String>,
    },
    /// Replay and check a certificate file
    Verify {
        #[arg(long = "in")]
        input: String,
    },
    /// Run the property self-test suite and print a summary table
    Selftest,
}

fn exit_code_for(e: &Error) -> ExitCode {
    match e {
        Error::SearchCapExceeded { .. } | Error::FactorizationFailure(_) => ExitCode::from(2),
        Error::Internal(_) => ExitCode::from(1),
        _ => ExitCode::from(3),
    }
}

fn write_out(out: &Option<String>, text: &str) -> Result<(), Error> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Error::Parse(format!("write {path}: {e}"))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn gen_instance(
    shape: Shape,
    ring: Ring,
    mode: Mode,
    len: usize,
    degree: u32,
    seed: u64,
) -> Result<Instance, Error> {
    let icfg = InstanceCfg { length: len, max_degree: degree, seed };
    Ok(match mode {
        Mode::Column => Instance::Column(random_instance(shape, ring, &icfg)?),
        Mode::Matrix => Instance::Matrix(random_matrix(shape, ring, &icfg)?),
    })
}

fn reduce_one(
    inst: &Instance,
    seed: Option<u64>,
    cfg: &PipelineCfg,
) -> Result<serde_json::Value, Error> {
    match inst {
        Instance::Column(b) => certify_column(b, cfg, seed).map(|c| c.to_json()),
        Instance::Matrix(g) => certify_matrix(g, cfg, seed).map(|c| c.to_json()),
    }
}

fn run() -> Result<ExitCode, Error> {
    let cli = Cli::parse();
    match cli.command {
        Command::Bound { ring, mode } => {
            let (shape, r) = ring.build()?;
            let n = compute_bound(
                r.nvars as u64,
                r.coeff.declared_dim(),
                shape.r as u64,
                shape.parity,
                mode.to_mode(),
            )?;
            println!("{n}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Gen { ring, mode, len, degree, seed, count, out } => {
            let (shape, r) = ring.build()?;
            let docs: Vec<serde_json::Value> = (0..count)
                .map(|i| {
                    gen_instance(shape, r, mode.to_mode(), len, degree, seed + i as u64)
                        .map(|inst| inst.to_json())
                })
                .collect::<Result<_, _>>()?;
            let text = if count == 1 {
                serde_json::to_string_pretty(&docs[0]).expect("serializable")
            } else {
                serde_json::to_string_pretty(&serde_json::Value::Array(docs))
                    .expect("serializable")
            };
            write_out(&out, &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Reduce { ring, mode, input, len, degree, seed, count, cap, jobs, out } => {
            let cfg =
                PipelineCfg { search: SearchCfg { candidate_cap: cap, ..SearchCfg::default() } };
            let instances: Vec<(Instance, Option<u64>)> = match input {
                Some(path) => {
                    let text = fs::read_to_string(&path)
                        .map_err(|e| Error::Parse(format!("read {path}: {e}")))?;
                    let doc: serde_json::Value = serde_json::from_str(&text)
                        .map_err(|e| Error::Parse(format!("parse {path}: {e}")))?;
                    match doc.as_array() {
                        Some(arr) => arr
                            .iter()
                            .map(|d| parse_instance(d).map(|i| (i, None)))
                            .collect::<Result<_, _>>()?,
                        None => vec![(parse_instance(&doc)?, None)],
                    }
                }
                None => {
                    let (shape, r) = ring.build()?;
                    (0..count)
                        .map(|i| {
                            let s = seed + i as u64;
                            gen_instance(shape, r, mode.to_mode(), len, degree, s)
                                .map(|inst| (inst, Some(s)))
                        })
                        .collect::<Result<_, _>>()?
                }
            };
            let jobs = jobs.max(1);
            let results: Vec<Result<serde_json::Value, Error>> = if jobs == 1 {
                instances.iter().map(|(inst, seed)| reduce_one(inst, *seed, &cfg)).collect()
            } else {
                // chunks preserve instance order, so output stays
                // deterministic by index
                std::thread::scope(|scope| {
                    let handles: Vec<_> = instances
                        .chunks(instances.len().div_ceil(jobs))
                        .map(|chunk| {
                            scope.spawn(move || {
                                chunk
                                    .iter()
                                    .map(|(inst, seed)| reduce_one(inst, *seed, &cfg))
                                    .collect::<Vec<_>>()
                            })
                        })
                        .collect();
                    handles.into_iter().flat_map(|h| h.join().expect("worker")).collect()
                })
            };
            let mut docs = Vec::with_capacity(results.len());
            for r in results {
                docs.push(r?);
            }
            let text = if docs.len() == 1 {
                serde_json::to_string_pretty(&docs[0]).expect("serializable")
            } else {
                serde_json::to_string_pretty(&serde_json::Value::Array(docs))
                    .expect("serializable")
            };
            write_out(&out, &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { input } => {
            let text = fs::read_to_string(&input)
                .map_err(|e| Error::Parse(format!("read {input}: {e}")))?;
            let doc: serde_json::Value = serde_json::from_str(&text)
                .map_err(|e| Error::Parse(format!("parse {input}: {e}")))?;
            let docs: Vec<serde_json::Value> = match doc.as_array() {
                Some(arr) => arr.to_vec(),
                None => vec![doc],
            };
            let mut all_ok = true;
            for (i, d) in docs.iter().enumerate() {
                let parsed = parse_certificate(d)?;
                let report = verify_certificate(&parsed)?;
                if docs.len() > 1 {
                    println!("certificate {i}:");
                }
                print!("{}", report.render());
                all_ok &= report.all_passed();
            }
            Ok(if all_ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Selftest => selftest(),
    }
}

fn selftest() -> Result<ExitCode, Error> {
    use orthocert::orthocore::{
        mu, mu_word, theta_check, OrthoMatrix, SquareMatrix, ThetaMatrix, Transvection, Word,
    };
    use orthocert::polyring::Poly;
    use rand::{Rng, SeedableRng};

    let mut rows: Vec<(&str, usize, bool)> = Vec::new();
    let ring = Ring::new(CoeffRing::prime_field(5)?, 1);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);

    // transvection algebra: additivity and inversion as exact identities
    {
        let shape = Shape::new(3, Parity::Even);
        let mut ok = true;
        for _ in 0..100 {
            let (i, j) = loop {
                let i = rng.gen_range(-3..=3i32);
                let j = rng.gen_range(-3..=3i32);
                if i != 0 && j != 0 && i != j && i != -j {
                    break (i, j);
                }
            };
            let a = Poly::from_i64(ring, rng.gen_range(0..5));
            let b = Poly::from_i64(ring, rng.gen_range(0..5));
            let ta = Transvection::long(OrthoIndex(i), OrthoIndex(j), a.clone())?;
            let tb = Transvection::long(OrthoIndex(i), OrthoIndex(j), b.clone())?;
            let tsum = Transvection::long(OrthoIndex(i), OrthoIndex(j), a.add(&b))?;
            let lhs = Word::new(vec![ta.clone(), tb]).to_matrix(shape, ring)?;
            ok &= lhs == tsum.matrix(shape, ring)?;
            let inv = Word::new(vec![ta.clone(), ta.inverse()]).to_matrix(shape, ring)?;
            ok &= inv == OrthoMatrix::identity(shape, ring)?;
        }
        rows.push(("transvection algebra", 100, ok));
    }

    // mu inverse identity and word bound at r = 3
    {
        let mut ok = true;
        let x = Poly::variable(ring, 0);
        for _ in 0..40 {
            let u: Vec<Poly> =
                (0..2).map(|_| Poly::from_i64(ring, rng.gen_range(0..5))).collect();
            let v: Vec<Poly> =
                (0..2).map(|_| Poly::from_i64(ring, rng.gen_range(0..5))).collect();
            let s = x.mul_coeff(&ring.coeff.from_i64(rng.gen_range(1..5)));
            let m = mu(&u, &s, &v)?;
            let vneg: Vec<Poly> = v.iter().map(|p| p.neg()).collect();
            ok &= m.mul(&mu(&u, &s, &vneg)?).is_identity();
            ok &= mu_word(&u, &s, &v)?.len() <= 7 * 3 - 3;
        }
        rows.push(("mu machinery", 40, ok));
    }

    // unipotent words at r = 4
    {
        let shape = Shape::new(4, Parity::Even);
        let mut ok = true;
        for _ in 0..40 {
            let mut m = SquareMatrix::zero(4, ring);
            for a in 1..=4usize {
                for b in 1..=4usize {
                    if a + b < 5 {
                        let val = Poly::from_i64(ring, rng.gen_range(0..5));
                        m.set(a, b, val.clone());
                        m.set(5 - b, 5 - a, val.neg());
                    }
                }
            }
            ok &= theta_check(&m);
            let theta = ThetaMatrix::new(m)?;
            let w = theta.unipotent_word(shape)?;
            ok &= w.len() <= 6 && w.to_matrix(shape, ring)? == theta.unipotent_embed(shape)?;
        }
        rows.push(("unipotent words", 40, ok));
    }

    // end-to-end reductions with certificate verification
    {
        let shape = Shape::new(3, Parity::Even);
        let cfg = PipelineCfg::default();
        let mut ok = true;
        for seed in 0..5u64 {
            let icfg = InstanceCfg { length: 8, max_degree: 1, seed };
            let b = random_instance(shape, ring, &icfg)?;
            let cert = certify_column(&b, &cfg, Some(seed))?;
            let parsed = parse_certificate(&cert.to_json())?;
            ok &= verify_certificate(&parsed)?.all_passed();
        }
        rows.push(("column reduction + verify", 5, ok));
    }

    // tamper detection
    {
        let shape = Shape::new(3, Parity::Even);
        let cfg = PipelineCfg::default();
        let icfg = InstanceCfg { length: 8, max_degree: 1, seed: 99 };
        let b = random_instance(shape, ring, &icfg)?;
        let cert = certify_column(&b, &cfg, None)?;
        let mut doc = cert.to_json();
        doc["claimed_bound"] = serde_json::json!(0);
        let parsed = parse_certificate(&doc)?;
        let flagged = !verify_certificate(&parsed)?.all_passed();
        rows.push(("tamper detection", 1, flagged));
    }

    let mut all = true;
    println!("{:<28} {:>6}  result", "suite", "cases");
    for (name, cases, ok) in &rows {
        println!("{name:<28} {cases:>6}  {}", if *ok { "PASS" } else { "FAIL" });
        all &= ok;
    }
    Ok(if all { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

use std::fs;
use std::net::TcpListener;
use std::path::{Path, PathBuf};
use std::thread;
use std::time::{Duration, Instant};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use textclass::dealer::{self, stream, ModelKind, RandomnessBundle};
use textclass::pipeline::{
    self, batch_classify, evaluate_accuracy, parse_labeled, profile_for, BatchJob, SessionConfig, SessionReport,
    DEFAULT_PAD,
};
use textclass::scoring::{exact_classify, plaintext_classify, Model};
use textclass::text::{build_lexicon, build_token_set, collision_report, BucketLayout, ElementLayout, HashParams};
use textclass::transport::{accept, connect};
use textclass::{Disclosure, Party};

#[derive(Parser)]
#[command(name = "textclass", version, about = "Two-party private text classification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Deal correlated randomness for one session.
    Deal(DealArgs),
    /// Act as Alice, the message owner.
    Alice {
        #[command(subcommand)]
        command: AliceCommand,
    },
    /// Act as Bob, the model owner.
    Bob {
        #[command(subcommand)]
        command: BobCommand,
    },
    /// Classify in the clear.
    Oracle {
        #[command(subcommand)]
        command: OracleCommand,
    },
    /// Time repeated local sessions and print a CSV summary.
    Bench(BenchArgs),
    /// Compare secure and plaintext accuracy on a labeled file.
    Accuracy(AccuracyArgs),
    /// Report hash collisions in a lexicon file.
    Collisions(CollisionArgs),
}

#[derive(Subcommand)]
enum AliceCommand {
    Classify(AliceArgs),
}

#[derive(Subcommand)]
enum BobCommand {
    Serve(BobArgs),
}

#[derive(Subcommand)]
enum OracleCommand {
    Classify(OracleArgs),
}

#[derive(Args, Clone)]
struct HashArgs {
    /// TOML file with keys p, a, b, bits.
    #[arg(long)]
    hash_config: Option<PathBuf>,
    #[arg(long)]
    hash_p: Option<u64>,
    #[arg(long)]
    hash_a: Option<u64>,
    #[arg(long)]
    hash_b: Option<u64>,
    /// Identifier bit-length l.
    #[arg(long)]
    token_bits: Option<u32>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct HashFile {
    p: Option<u64>,
    a: Option<u64>,
    b: Option<u64>,
    bits: Option<u32>,
}

impl HashArgs {
    fn params(&self) -> Result<HashParams> {
        let mut h = HashParams::default();
        if let Some(path) = &self.hash_config {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let f: HashFile = toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
            h.p = f.p.unwrap_or(h.p);
            h.a = f.a.unwrap_or(h.a);
            h.b = f.b.unwrap_or(h.b);
            h.bits = f.bits.unwrap_or(h.bits);
        }
        h.p = self.hash_p.unwrap_or(h.p);
        h.a = self.hash_a.unwrap_or(h.a);
        h.b = self.hash_b.unwrap_or(h.b);
        h.bits = self.token_bits.unwrap_or(h.bits);
        h.validate()?;
        Ok(h)
    }
}

#[derive(Args, Clone)]
struct LayoutArgs {
    /// Bucketize as t,s1,s2: 2^t buckets holding s1 of Bob's features
    /// and s2 of Alice's tokens each.
    #[arg(long, value_parser = parse_buckets)]
    buckets: Option<BucketLayout>,
    /// Pad Alice's tokens to this many elements.
    #[arg(long, default_value_t = DEFAULT_PAD)]
    pad_to: usize,
    /// Send Alice's elements unpadded, revealing their count.
    #[arg(long, conflicts_with = "pad_to")]
    no_pad: bool,
}

impl LayoutArgs {
    fn layout(&self) -> ElementLayout {
        match (self.buckets, self.no_pad) {
            (Some(b), _) => ElementLayout::Bucketed(b),
            (None, true) => ElementLayout::Plain,
            (None, false) => ElementLayout::Padded { to: self.pad_to },
        }
    }
}

fn parse_buckets(s: &str) -> Result<BucketLayout, String> {
    s.parse().map_err(|e: textclass::text::TextError| e.to_string())
}

fn parse_disclosure(s: &str) -> Result<Disclosure, String> {
    s.parse()
}

#[derive(Args)]
struct DealArgs {
    /// Bob's lexicon size.
    #[arg(long, required_unless_present = "model_file")]
    n: Option<usize>,
    /// Alice's token count; only needed with --no-pad.
    #[arg(long)]
    m: Option<usize>,
    /// Identifier bit-length.
    #[arg(long, default_value_t = HashParams::default().bits)]
    l: u32,
    #[arg(long, value_parser = ["lr", "ada"], required_unless_present = "model_file")]
    model: Option<String>,
    /// Take n and the model family from a model file.
    #[arg(long, conflicts_with_all = ["n", "model"])]
    model_file: Option<PathBuf>,
    #[command(flatten)]
    layout: LayoutArgs,
    /// 32-byte hex seed for reproducible dealing.
    #[arg(long)]
    seed: Option<String>,
    #[arg(long, required_unless_present = "serve")]
    out_alice: Option<PathBuf>,
    #[arg(long, required_unless_present = "serve")]
    out_bob: Option<PathBuf>,
    /// Hand the bundles out over a socket instead, then exit.
    #[arg(long)]
    serve: Option<String>,
}

#[derive(Args, Clone)]
struct BundleSource {
    /// Bundle file.
    #[arg(long, required_unless_present = "dealer")]
    bundle: Vec<PathBuf>,
    /// Fetch the bundle from a dealer socket.
    #[arg(long, conflicts_with = "bundle")]
    dealer: Option<String>,
}

#[derive(Args)]
struct AliceArgs {
    #[arg(long)]
    text_file: PathBuf,
    #[arg(long)]
    connect: String,
    #[command(flatten)]
    source: BundleSource,
    #[command(flatten)]
    layout: LayoutArgs,
    #[command(flatten)]
    hash: HashArgs,
    #[arg(long, default_value = "to-bob", value_parser = parse_disclosure)]
    disclose: Disclosure,
    #[arg(long, default_value_t = 60)]
    session_timeout: u64,
    /// Keep retrying the connection for this many seconds.
    #[arg(long, default_value_t = 10)]
    connect_retry: u64,
}

#[derive(Args)]
struct BobArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    listen: String,
    /// One bundle per session, handed to connections in arrival order.
    /// Sessions run concurrently.
    #[command(flatten)]
    source: BundleSource,
    /// Sessions to serve when bundles come from a dealer socket.
    #[arg(long, default_value_t = 1)]
    sessions: usize,
    #[command(flatten)]
    hash: HashArgs,
    #[arg(long, default_value = "to-bob", value_parser = parse_disclosure)]
    disclose: Disclosure,
    #[arg(long, default_value_t = 60)]
    session_timeout: u64,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    text_file: PathBuf,
    #[command(flatten)]
    hash: HashArgs,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, default_value_t = 3)]
    jobs: usize,
    #[arg(long)]
    model: PathBuf,
    /// Message to classify; a generated one is used otherwise.
    #[arg(long)]
    text_file: Option<PathBuf>,
    /// Token count of the generated message.
    #[arg(long, default_value_t = 32)]
    tokens: usize,
    #[command(flatten)]
    layout: LayoutArgs,
    #[command(flatten)]
    hash: HashArgs,
    /// Run over TCP loopback instead of in memory.
    #[arg(long)]
    tcp: bool,
    /// Concurrent sessions (in-memory mode only).
    #[arg(long, default_value_t = 1)]
    workers: usize,
}

#[derive(Args)]
struct AccuracyArgs {
    #[arg(long)]
    model: PathBuf,
    /// Lines of `label<TAB>text`.
    #[arg(long)]
    labeled: PathBuf,
    #[command(flatten)]
    layout: LayoutArgs,
    #[command(flatten)]
    hash: HashArgs,
}

#[derive(Args)]
struct CollisionArgs {
    /// One feature per line.
    #[arg(long)]
    lexicon: PathBuf,
    #[command(flatten)]
    hash: HashArgs,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_model(path: &Path) -> Result<Model> {
    Model::load(path).with_context(|| format!("loading model {}", path.display()))
}

fn parse_seed(hex_seed: &str) -> Result<[u8; 32]> {
    let bytes = hex::decode(hex_seed).context("seed is not hex")?;
    bytes
        .try_into()
        .map_err(|b: Vec<u8>| anyhow!("seed must be 32 bytes, got {}", b.len()))
}

fn deal(args: DealArgs) -> Result<()> {
    let (n, kind) = match &args.model_file {
        Some(path) => {
            let m = load_model(path)?;
            (m.len(), m.kind())
        }
        None => (
            args.n.expect("required by clap"),
            match args.model.as_deref() {
                Some("ada") => ModelKind::Ada,
                _ => ModelKind::Lr,
            },
        ),
    };
    let layout = args.layout.layout();
    let m = match layout {
        ElementLayout::Plain => args.m.ok_or_else(|| anyhow!("--no-pad needs --m"))?,
        _ => args.m.unwrap_or(0),
    };
    let profile = profile_for(layout, n, m, args.l, kind);
    let seed = args.seed.as_deref().map(parse_seed).transpose()?;
    let (a, b) = dealer::deal(&profile, seed)?;
    let d = dealer::count_demand(&profile);
    eprintln!(
        "dealt {} Z_2 and {} Z_2^64 triples for n={} m={} l={} key bits={}",
        d.z2_triples,
        d.zq_triples,
        profile.n,
        profile.m,
        profile.token_bits,
        profile.key_bits()
    );
    match &args.serve {
        Some(addr) => {
            let listener = TcpListener::bind(addr).with_context(|| format!("binding {addr}"))?;
            eprintln!("serving bundles on {}", listener.local_addr()?);
            stream::serve_bundles(&listener, &a, &b)?;
        }
        None => {
            let (pa, pb) = (args.out_alice.expect("required"), args.out_bob.expect("required"));
            dealer::persist_bundle(&a, &pa).with_context(|| format!("writing {}", pa.display()))?;
            dealer::persist_bundle(&b, &pb).with_context(|| format!("writing {}", pb.display()))?;
        }
    }
    Ok(())
}

fn bundles(source: &BundleSource, party: Party, count: usize, timeout: Duration) -> Result<Vec<RandomnessBundle>> {
    if let Some(addr) = &source.dealer {
        return (0..count)
            .map(|_| stream::fetch_bundle(addr.as_str(), party, Some(timeout)).map_err(Into::into))
            .collect();
    }
    source
        .bundle
        .iter()
        .map(|p| dealer::load_bundle(p).with_context(|| format!("loading bundle {}", p.display())))
        .collect()
}

fn print_report(r: &SessionReport) {
    let t = &r.timings;
    eprintln!(
        "phases: extraction {:.3}s/{} rounds, classification {:.3}s/{} rounds, total {:.3}s, {} bytes sent, {} received",
        t.extraction.wall_time.as_secs_f64(),
        t.extraction.rounds,
        t.classification.wall_time.as_secs_f64(),
        t.classification.rounds,
        t.total.wall_time.as_secs_f64(),
        t.total.bytes_sent,
        t.total.bytes_received
    );
    match r.label {
        Some(l) => println!("class {}", l as u8),
        None => println!("class withheld (share {})", r.share.value()),
    }
}

fn alice(args: AliceArgs) -> Result<()> {
    let timeout = Duration::from_secs(args.session_timeout);
    let text = read(&args.text_file)?;
    let bundle = bundles(&args.source, Party::Alice, 1, timeout)?
        .into_iter()
        .next()
        .ok_or_else(|| anyhow!("no bundle given"))?;
    let config = SessionConfig {
        hash: args.hash.params()?,
        disclosure: args.disclose,
        layout: args.layout.layout(),
        record_transcript: false,
    };
    let deadline = Instant::now() + Duration::from_secs(args.connect_retry);
    let transport = loop {
        match connect(args.connect.as_str(), rand::random(), Some(timeout)) {
            Ok(t) => break t,
            Err(e) if Instant::now() < deadline => {
                eprintln!("waiting for Bob at {}: {e}", args.connect);
                thread::sleep(Duration::from_millis(500));
            }
            Err(e) => return Err(e).with_context(|| format!("connecting to {}", args.connect)),
        }
    };
    let report = pipeline::run_alice(transport, bundle, &text, &config)?;
    print_report(&report);
    Ok(())
}

fn bob(args: BobArgs) -> Result<()> {
    let timeout = Duration::from_secs(args.session_timeout);
    let model = load_model(&args.model)?;
    let config = SessionConfig {
        hash: args.hash.params()?,
        disclosure: args.disclose,
        ..SessionConfig::default()
    };
    let listener = TcpListener::bind(&args.listen).with_context(|| format!("binding {}", args.listen))?;
    eprintln!("listening on {}", listener.local_addr()?);
    let count = if args.source.dealer.is_some() {
        args.sessions
    } else {
        args.source.bundle.len()
    };
    let bundles = bundles(&args.source, Party::Bob, count, timeout)?;
    let failures = thread::scope(|s| -> Result<usize> {
        let mut handles = Vec::with_capacity(count);
        for (i, bundle) in bundles.into_iter().enumerate() {
            let transport = accept(&listener, Some(timeout))?;
            let (model, config) = (&model, &config);
            handles.push(
                s.spawn(move || match pipeline::run_bob(transport, bundle, model, config) {
                    Ok(report) => {
                        eprint!("session {}: ", i + 1);
                        print_report(&report);
                        true
                    }
                    Err(e) => {
                        eprintln!("session {} failed: {e}", i + 1);
                        false
                    }
                }),
            );
        }
        Ok(handles
            .into_iter()
            .map(|h| h.join())
            .filter(|r| !matches!(r, Ok(true)))
            .count())
    })?;
    if failures > 0 {
        bail!("{failures} of {count} sessions failed");
    }
    Ok(())
}

fn oracle(args: OracleArgs) -> Result<()> {
    let model = load_model(&args.model)?;
    let hash = args.hash.params()?;
    let text = read(&args.text_file)?;
    let lexicon = build_lexicon(model.features(), &hash)?;
    let x = lexicon.indicator(&build_token_set(&text, &hash));
    println!("class {}", plaintext_classify(&model, &x) as u8);
    eprintln!(
        "{} of {} features present; unrounded weights give class {}",
        x.iter().filter(|&&b| b).count(),
        x.len(),
        exact_classify(&model, &x) as u8
    );
    Ok(())
}

/// A message of `tokens` distinct unigrams and bigrams: k words give
/// 2k - 1 tokens, so an odd count is hit exactly.
fn synthetic_text(tokens: usize) -> String {
    let words = tokens.div_ceil(2).max(1);
    (0..words).map(|i| format!("w{i}")).collect::<Vec<_>>().join(" ")
}

fn bench(args: BenchArgs) -> Result<()> {
    let model = load_model(&args.model)?;
    let text = match &args.text_file {
        Some(p) => read(p)?,
        None => synthetic_text(args.tokens),
    };
    let config = SessionConfig {
        hash: args.hash.params()?,
        layout: args.layout.layout(),
        ..SessionConfig::default()
    };
    let mut jobs = Vec::with_capacity(args.jobs);
    for _ in 0..args.jobs {
        jobs.push(BatchJob {
            text: text.clone(),
            bundles: pipeline::deal_for(&model, &text, &config, None)?,
        });
    }
    let report = if args.tcp {
        let results = jobs
            .into_iter()
            .map(|j| pipeline::classify_over_tcp(&model, &j.text, &config, j.bundles, Some(Duration::from_secs(120))))
            .collect();
        pipeline::BatchReport::from_results(results)
    } else {
        batch_classify(&model, jobs, &config, args.workers)
    };
    for (i, r) in report.results.iter().enumerate() {
        if let Err(e) = r {
            eprintln!("job {} failed: {e}", i + 1);
        }
    }
    print!("{}", report.to_csv());
    if report.failures() > 0 {
        bail!("{} of {} jobs failed", report.failures(), report.results.len());
    }
    Ok(())
}

fn accuracy(args: AccuracyArgs) -> Result<()> {
    let model = load_model(&args.model)?;
    let labeled = parse_labeled(&read(&args.labeled)?).map_err(|e| anyhow!(e))?;
    let config = SessionConfig {
        hash: args.hash.params()?,
        layout: args.layout.layout(),
        ..SessionConfig::default()
    };
    let r = evaluate_accuracy(&model, &labeled, &config)?;
    println!("messages {}", r.total);
    println!("secure accuracy {:.4}", r.secure_accuracy());
    println!("plaintext accuracy {:.4}", r.plaintext_accuracy());
    println!("label agreement {}/{}", r.agreements, r.total);
    if r.agreements != r.total {
        bail!("secure and plaintext labels disagree");
    }
    Ok(())
}

fn collisions(args: CollisionArgs) -> Result<()> {
    let hash = args.hash.params()?;
    let words: Vec<String> = read(&args.lexicon)?
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(String::from)
        .collect();
    let r = collision_report(&words, &hash);
    println!(
        "{} distinct words, {} identifiers at l = {}",
        r.words, r.distinct_ids, hash.bits
    );
    for (id, group) in &r.groups {
        println!("{id}: {}", group.join(" | "));
    }
    Ok(())
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Deal(a) => deal(a),
        Command::Alice {
            command: AliceCommand::Classify(a),
        } => alice(a),
        Command::Bob {
            command: BobCommand::Serve(a),
        } => bob(a),
        Command::Oracle {
            command: OracleCommand::Classify(a),
        } => oracle(a),
        Command::Bench(a) => bench(a),
        Command::Accuracy(a) => accuracy(a),
        Command::Collisions(a) => collisions(a),
    }
}

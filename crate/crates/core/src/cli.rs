//! `hrlz` command line.

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{self, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{error::ErrorKind, CommandFactory, Parser, Subcommand, ValueEnum};

use crate::codec::{self, Archive, Compression, RootCost};
use crate::corpus::{self, Format};
use crate::costgraph::LshParams;

#[derive(Debug, Parser)]
#[command(name = "hrlz", version, about = "Hierarchical relative Lempel-Ziv compression of sequence collections")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compress a collection into an archive.
    Compress(CompressArgs),
    /// Restore the original file from an archive.
    Decompress {
        /// Archive path, `-` for stdin.
        input: PathBuf,
        /// Output path, `-` for stdout.
        output: PathBuf,
    },
    /// Print archive statistics as CSV.
    Stats {
        /// Archive path, `-` for stdin.
        input: PathBuf,
        /// Also print one row per node.
        #[arg(long)]
        nodes: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    /// Single reference.
    Rlz,
    /// Tree over the complete cost graph.
    OptHrlz,
    /// Tree over the LSH-sparsified cost graph.
    ApproxHrlz,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Fasta,
    Lines,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Fasta => Format::Fasta,
            FormatArg::Lines => Format::Lines,
        }
    }
}

#[derive(Debug, clap::Args)]
pub struct CompressArgs {
    #[arg(long, value_enum)]
    pub mode: ModeArg,
    #[arg(long, value_enum, default_value = "fasta")]
    pub format: FormatArg,
    /// 1-based id of the reference sequence (rlz only).
    #[arg(long)]
    pub reference: Option<usize>,
    /// k-mer length for fingerprints. Lower it for sequences much shorter
    /// than 256 bytes.
    #[arg(long, default_value_t = 256, value_parser = clap::value_parser!(u64).range(1..))]
    pub k: u64,
    /// Hash functions per round.
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u64).range(1..))]
    pub q: u64,
    /// Prune the active set every this many rounds.
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
    pub prune_every: u64,
    #[arg(long, default_value_t = 1000)]
    pub max_rounds: usize,
    /// Include the cost of storing the root verbatim when choosing the tree.
    #[arg(long)]
    pub root_cost: bool,
    /// Worker threads for fingerprinting and edge weighting (0 = all cores).
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
    #[arg(long, env = "HRLZ_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Write the weighted cost graph as CSV.
    #[arg(long)]
    pub dump_edges: Option<PathBuf>,
    /// Write the chosen tree, one `child parent weight` line per node.
    #[arg(long)]
    pub dump_tree: Option<PathBuf>,
    /// Input collection, `-` for stdin.
    pub input: PathBuf,
    /// Output archive, `-` for stdout.
    pub output: PathBuf,
}

/// Runs the command line and returns the process exit status: 0 on success,
/// 2 on usage errors, 1 on I/O or archive errors.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    if let Command::Compress(args) = &cli.command {
        if let Err(msg) = check_compress_args(args) {
            let err = Cli::command().error(ErrorKind::ArgumentConflict, msg);
            let _ = err.print();
            return 2;
        }
    }
    match execute(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("hrlz: {e}");
            1
        }
    }
}

fn check_compress_args(args: &CompressArgs) -> Result<(), String> {
    match (args.mode, args.reference) {
        (ModeArg::Rlz, None) => Err("--mode rlz requires --reference".into()),
        (ModeArg::Rlz, Some(0)) => Err("--reference is 1-based".into()),
        (ModeArg::OptHrlz | ModeArg::ApproxHrlz, Some(_)) => {
            Err("--reference is only valid with --mode rlz".into())
        }
        _ => Ok(()),
    }
}

fn execute(command: Command) -> crate::Result<()> {
    match command {
        Command::Compress(args) => compress(&args),
        Command::Decompress { input, output } => {
            let archive = Archive::from_bytes(&read_input(&input)?)?;
            let collection = codec::decompress(&archive)?;
            write_output(&output, &collection.to_bytes())
        }
        Command::Stats { input, nodes } => {
            let archive = Archive::from_bytes(&read_input(&input)?)?;
            let stats = codec::stats(&archive);
            let stdout = io::stdout();
            let mut out = stdout.lock();
            writeln!(out, "{}", codec::Stats::SUMMARY_HEADER)?;
            writeln!(out, "{}", stats.summary_row())?;
            if nodes {
                writeln!(out, "node,parent,phrases,depth")?;
                for (v, p) in archive.parent.iter().enumerate() {
                    let parent = p.map_or(-1, |p| p as i64);
                    writeln!(out, "{v},{parent},{},{}", stats.phrases[v], stats.depths[v])?;
                }
            }
            Ok(())
        }
    }
}

fn compress(args: &CompressArgs) -> crate::Result<()> {
    let started = Instant::now();
    let collection = corpus::parse(&read_input(&args.input)?, args.format.into())?;
    let root_cost = if args.root_cost {
        RootCost::SequenceLength
    } else {
        RootCost::Ignore
    };
    let params = LshParams {
        k: args.k as usize,
        q: args.q as usize,
        prune_every: args.prune_every as usize,
        seed: args.seed,
        max_rounds: args.max_rounds,
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.threads)
        .build()
        .map_err(|e| io::Error::other(e.to_string()))?;
    let (archive, built) = pool.install(|| -> crate::Result<(Archive, Option<Compression>)> {
        Ok(match args.mode {
            ModeArg::Rlz => {
                let reference = args.reference.expect("checked by check_compress_args") - 1;
                (codec::compress_rlz(&collection, reference)?, None)
            }
            ModeArg::OptHrlz => {
                let c = codec::optimal_pipeline(&collection, root_cost);
                (c.archive.clone(), Some(c))
            }
            ModeArg::ApproxHrlz => {
                let c = codec::approx_pipeline(&collection, &params, root_cost);
                (c.archive.clone(), Some(c))
            }
        })
    })?;

    if let Some(c) = &built {
        if let Some(path) = &args.dump_edges {
            c.graph.write_csv(BufWriter::new(File::create(path)?))?;
        }
        if let Some(path) = &args.dump_tree {
            c.tree.write_dump(&c.graph, BufWriter::new(File::create(path)?))?;
        }
    }

    write_output(&args.output, &archive.to_bytes())?;

    let stats = codec::stats(&archive);
    let mode = match args.mode {
        ModeArg::Rlz => "rlz",
        ModeArg::OptHrlz => "opt-hrlz",
        ModeArg::ApproxHrlz => "approx-hrlz",
    };
    let summary = format!(
        "mode={mode} sequences={} phrases={} max_depth={} avg_depth={:.4} seconds={:.3}",
        stats.sequences(),
        stats.total_phrases,
        stats.max_depth,
        stats.avg_depth,
        started.elapsed().as_secs_f64()
    );
    if is_stdio(&args.output) {
        eprintln!("{summary}");
    } else {
        println!("{summary}");
    }
    Ok(())
}

fn is_stdio(path: &Path) -> bool {
    path.as_os_str() == "-"
}

fn read_input(path: &Path) -> io::Result<Vec<u8>> {
    if is_stdio(path) {
        let mut buf = Vec::new();
        io::stdin().lock().read_to_end(&mut buf)?;
        Ok(buf)
    } else {
        fs::read(path)
    }
}

fn write_output(path: &Path, data: &[u8]) -> crate::Result<()> {
    if is_stdio(path) {
        let stdout = io::stdout();
        let mut out = stdout.lock();
        out.write_all(data)?;
        out.flush()?;
    } else {
        fs::write(path, data)?;
    }
    Ok(())
}

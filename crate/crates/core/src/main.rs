use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use ppe_rdh::bench::{self, BenchConfig, DEFAULT_SEED};
use ppe_rdh::codec::{self, bits, EmbedOptions};
use ppe_rdh::image_io::{format_psnr, psnr, read_pgm_file, write_pgm_file};
use ppe_rdh::{Error, Result};

#[derive(Parser)]
#[command(
    name = "ppe-rdh",
    version,
    about = "Reversible data hiding in grayscale PGM images"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Hide the bytes of a file in a cover image.
    Embed {
        #[arg(long)]
        cover: PathBuf,
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(1..=2))]
        passes: u8,
        /// Prefix step used while searching for shift parameters.
        #[arg(long)]
        step: Option<usize>,
        #[arg(long)]
        key: Option<String>,
    },
    /// Recover the hidden bytes and the original cover.
    Extract {
        #[arg(long)]
        marked: PathBuf,
        /// Where to write the recovered cover.
        #[arg(long)]
        out: PathBuf,
        /// Where to write the recovered payload.
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        key: Option<String>,
    },
    /// Print the embedding header of a marked image.
    Info { file: PathBuf },
    /// PSNR between two images, in dB.
    Psnr { a: PathBuf, b: PathBuf },
    /// Payload/distortion sweep, written as CSV.
    Bench {
        #[arg(required = true)]
        images: Vec<PathBuf>,
        #[arg(long, value_delimiter = ',', default_values_t = bench::DEFAULT_PAYLOADS)]
        payloads: Vec<usize>,
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(1..=2))]
        passes: u8,
        #[arg(long)]
        step: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value = "bench-marked")]
        marked_dir: PathBuf,
        /// CSV destination; stdout when omitted.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Embed {
            cover,
            data,
            out,
            passes,
            step,
            key,
        } => {
            let cover = read_pgm_file(&cover)?;
            let secret = bits::bytes_to_bits(&fs::read(&data)?);
            let opts = EmbedOptions {
                passes: passes as usize,
                step,
                key,
            };
            let res = codec::embed(&cover, &secret, &opts)?;
            write_pgm_file(&out, &res.marked)?;
            println!(
                "embedded {} bits, psnr {} dB",
                res.secret_bits,
                format_psnr(res.psnr)
            );
            for (k, p) in res.passes.iter().enumerate() {
                let s = p.params;
                println!(
                    "pass {} ({:?}): l_p={} l_z={} r_p={} r_z={} bits={} visited={}",
                    k + 1,
                    p.target,
                    s.l_p,
                    s.l_z,
                    s.r_p,
                    s.r_z,
                    p.bits,
                    p.visited
                );
            }
        }
        Command::Extract {
            marked,
            out,
            data,
            key,
        } => {
            let marked = read_pgm_file(&marked)?;
            let res = codec::extract(&marked, key.as_deref())?;
            write_pgm_file(&out, &res.recovered)?;
            fs::write(&data, bits::bits_to_bytes(&res.secret))?;
            println!("extracted {} bits", res.secret.len());
        }
        Command::Info { file } => {
            let header = codec::read_header(&read_pgm_file(&file)?)?;
            println!("passes: {}", header.pass_count());
            for (k, p) in header.passes.iter().enumerate() {
                let s = p.params;
                println!(
                    "pass {}: l_p={} l_z={} r_p={} r_z={} bit_count={}",
                    k + 1,
                    s.l_p,
                    s.l_z,
                    s.r_p,
                    s.r_z,
                    p.bit_count
                );
            }
        }
        Command::Psnr { a, b } => {
            println!(
                "{}",
                format_psnr(psnr(&read_pgm_file(&a)?, &read_pgm_file(&b)?)?)
            );
        }
        Command::Bench {
            images,
            payloads,
            passes,
            step,
            seed,
            marked_dir,
            csv,
        } => {
            if payloads.windows(2).any(|w| w[0] > w[1]) {
                return Err(Error::InvalidArgument("payloads must be ascending".into()));
            }
            let cfg = BenchConfig {
                images,
                payloads,
                passes: passes as usize,
                step,
                seed,
                marked_dir,
            };
            let rows = bench::run(&cfg)?;
            match csv {
                Some(path) => bench::write_csv(fs::File::create(path)?, &rows, seed)?,
                None => bench::write_csv(std::io::stdout().lock(), &rows, seed)?,
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error[{}]: {e}", e.name());
            ExitCode::FAILURE
        }
    }
}

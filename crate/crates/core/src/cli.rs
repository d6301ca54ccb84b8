//! Command-line front end.
//!
//! Exit codes: 0 success, 1 malformed input, 2 attack witness failure,
//! 3 I/O failure. Outputs are written to a temporary file in the target
//! directory and renamed into place.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::analysis::{measure_avalanche, measure_wrong_key_leak};
use crate::attack::{equivalent_decrypt, recover_equivalent_key, EquivalentKey};
use crate::cipher::{decrypt, encrypt};
use crate::error::Error;
use crate::keystream::SecretKey;
use crate::ppm::{self, write_ppm};
use crate::synth;

pub const EXIT_OK: i32 = 0;
pub const EXIT_MALFORMED: i32 = 1;
pub const EXIT_ATTACK_FAILED: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "dnacrack",
    version,
    about = "DNA/logistic-map image cipher workbench"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a random valid secret key file.
    Keygen {
        #[arg(long)]
        out: PathBuf,
        /// Seed for a reproducible key.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Encrypt a PPM image.
    Encrypt {
        #[arg(long)]
        key: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Decrypt a PPM image.
    Decrypt {
        #[arg(long)]
        key: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Recover an equivalent key from one plain/cipher pair.
    Attack {
        #[arg(long)]
        plain: PathBuf,
        #[arg(long)]
        cipher: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Decrypt with a recovered equivalent key.
    Eqdecrypt {
        #[arg(long)]
        eqkey: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Measure the cipher's response to single-bit plaintext flips.
    Avalanche {
        #[arg(long)]
        key: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        report: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Decrypt with a wrong key and measure what still leaks.
    Keyleak {
        #[arg(long)]
        truekey: PathBuf,
        #[arg(long)]
        wrongkey: PathBuf,
        #[arg(long)]
        plain: PathBuf,
        #[arg(long)]
        report: PathBuf,
    },
    /// Write a synthetic natural-looking test image.
    Synth {
        #[arg(long)]
        width: usize,
        #[arg(long)]
        height: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug)]
enum Failure {
    Malformed(String),
    Io(String),
    Attack(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Malformed(_) => EXIT_MALFORMED,
            Failure::Attack(_) => EXIT_ATTACK_FAILED,
            Failure::Io(_) => EXIT_IO,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Malformed(m) | Failure::Io(m) | Failure::Attack(m) => m,
        }
    }
}

fn classify(context: &Path, err: Error) -> Failure {
    match err {
        Error::Io(e) => Failure::Io(format!("{}: {e}", context.display())),
        other => Failure::Malformed(format!("{}: {other}", context.display())),
    }
}

fn read_bytes(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn read_image(path: &Path) -> Result<crate::RgbImage, Failure> {
    ppm::read_ppm(&read_bytes(path)?).map_err(|e| classify(path, e))
}

fn read_key(path: &Path) -> Result<SecretKey, Failure> {
    let bytes = read_bytes(path)?;
    let text = String::from_utf8(bytes)
        .map_err(|_| Failure::Malformed(format!("{}: key file is not UTF-8", path.display())))?;
    SecretKey::from_key_file(&text).map_err(|e| classify(path, e))
}

/// Write `data` next to `path` and rename it into place.
pub fn write_atomic(path: &Path, data: &[u8]) -> io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(data)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

fn write_out(path: &Path, data: &[u8]) -> Result<(), Failure> {
    write_atomic(path, data).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn in_paths_exist(paths: &[&Path]) -> Result<(), Failure> {
    for p in paths {
        if !p.exists() {
            return Err(Failure::Io(format!("{}: no such file", p.display())));
        }
    }
    Ok(())
}

fn execute(cmd: Command, stdout: &mut dyn Write) -> Result<(), Failure> {
    let malformed = |e: Error| Failure::Malformed(e.to_string());
    match cmd {
        Command::Keygen { out, seed } => {
            let key = match seed {
                Some(s) => SecretKey::random(&mut ChaCha8Rng::seed_from_u64(s)),
                None => SecretKey::random(&mut rand::thread_rng()),
            };
            write_out(&out, key.to_key_file().as_bytes())
        }
        Command::Encrypt { key, input, out } => {
            in_paths_exist(&[&key, &input])?;
            let key = read_key(&key)?;
            let img = read_image(&input)?;
            let cipher = encrypt(&img, &key).map_err(malformed)?;
            write_out(&out, &write_ppm(&cipher))
        }
        Command::Decrypt { key, input, out } => {
            in_paths_exist(&[&key, &input])?;
            let key = read_key(&key)?;
            let img = read_image(&input)?;
            let plain = decrypt(&img, &key).map_err(malformed)?;
            write_out(&out, &write_ppm(&plain))
        }
        Command::Attack {
            plain,
            cipher,
            out,
            report,
        } => {
            in_paths_exist(&[&plain, &cipher])?;
            let p = read_image(&plain)?;
            let c = read_image(&cipher)?;
            let rep = recover_equivalent_key(&p, &c).map_err(malformed)?;
            let text = rep.to_text();
            if let Some(path) = &report {
                write_out(path, text.as_bytes())?;
            }
            match &rep.recovered {
                Some(ek) => {
                    write_out(&out, &ek.to_bytes())?;
                    let _ = stdout.write_all(text.as_bytes());
                    Ok(())
                }
                None => Err(Failure::Attack(format!(
                    "attack failed: {}\n{text}",
                    rep.failure.map(|f| f.to_string()).unwrap_or_default()
                ))),
            }
        }
        Command::Eqdecrypt { eqkey, input, out } => {
            in_paths_exist(&[&eqkey, &input])?;
            let ek =
                EquivalentKey::from_bytes(&read_bytes(&eqkey)?).map_err(|e| classify(&eqkey, e))?;
            let img = read_image(&input)?;
            let plain = equivalent_decrypt(&img, &ek).map_err(malformed)?;
            write_out(&out, &write_ppm(&plain))
        }
        Command::Avalanche {
            key,
            input,
            trials,
            report,
            seed,
        } => {
            in_paths_exist(&[&key, &input])?;
            if trials == 0 {
                return Err(Failure::Malformed("--trials must be at least 1".into()));
            }
            let key = read_key(&key)?;
            let img = read_image(&input)?;
            let rep = measure_avalanche(&img, &key, trials, seed).map_err(malformed)?;
            let text = rep.to_text();
            write_out(&report, text.as_bytes())?;
            let _ = stdout.write_all(text.as_bytes());
            Ok(())
        }
        Command::Keyleak {
            truekey,
            wrongkey,
            plain,
            report,
        } => {
            in_paths_exist(&[&truekey, &wrongkey, &plain])?;
            let truekey = read_key(&truekey)?;
            let wrongkey = read_key(&wrongkey)?;
            let img = read_image(&plain)?;
            let cipher = encrypt(&img, &truekey).map_err(malformed)?;
            let rep = measure_wrong_key_leak(&cipher, &img, &wrongkey).map_err(malformed)?;
            let text = rep.to_text();
            write_out(&report, text.as_bytes())?;
            let _ = stdout.write_all(text.as_bytes());
            Ok(())
        }
        Command::Synth {
            width,
            height,
            seed,
            out,
        } => {
            if width == 0 || height == 0 {
                return Err(Failure::Malformed(
                    "width and height must be non-zero".into(),
                ));
            }
            write_out(&out, &write_ppm(&synth::natural_image(width, height, seed)))
        }
    }
}

/// Parse `args` (including the program name) and run. Returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_MALFORMED,
            };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if code == EXIT_OK { stdout } else { stderr };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    match execute(cli.command, stdout) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(stderr, "dnacrack: {}", f.message().trim_end());
            f.code()
        }
    }
}

use std::error::Error;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use cubeflow::cochain::{cohomology, cup, IntCochain};
use cubeflow::complex::{build_torus_grid, validate, RawComplex};
use cubeflow::geometry::{chain_map_check, intersect_cochain, validate_transverse, GeoCochain};
use cubeflow::product::fixtures::{figure1, t3_experiment, FIGURE1_DIMS, T3_DIMS};
use cubeflow::product::{threshold_sweep, ProductConfig};
use cubeflow::CubicalComplex;

type Res<T> = Result<T, Box<dyn Error>>;

#[derive(Parser)]
#[command(name = "cubeflow", version, about = "Cubical cup products against fiber products of flowed geometric cochains")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build or check cubical complexes.
    Complex {
        #[command(subcommand)]
        cmd: ComplexCmd,
    },
    /// Cup product of two integer cochains.
    Cup {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        complex: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Integral cohomology as CSV (degree, betti, torsion).
    Cohomology {
        #[arg(long)]
        complex: PathBuf,
    },
    /// The intersection cochain cI(W) of a geometric cochain.
    Intersect {
        w: PathBuf,
        #[arg(long)]
        complex: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
        /// Also check δ∘cI = cI∘∂ and report mismatches.
        #[arg(long)]
        chain_map: bool,
    },
    /// View a geometric cochain through the time-t flow.
    Flow {
        w: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        t: f64,
        #[arg(long)]
        complex: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Sweep t and compare cI(f_t W ×_M f_{-t} V) with cI(W) ⌣ cI(V).
    VerifyMain {
        #[arg(long)]
        complex: PathBuf,
        #[arg(long)]
        w: PathBuf,
        #[arg(long)]
        v: PathBuf,
        /// start:stop:step, inclusive.
        #[arg(long, default_value = "0:10:1")]
        t_grid: String,
        /// Report path; .json gives JSON, anything else CSV. Stdout if absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a shipped example (complex.json, W.json, V.json) to a directory.
    Example {
        name: ExampleName,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
}

#[derive(Subcommand)]
enum ComplexCmd {
    /// A torus grid with the given subdivisions per axis.
    Torus {
        #[arg(long, value_delimiter = ',', required = true)]
        dims: Vec<usize>,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// The standard n-cube.
    Cube {
        n: usize,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Check the complex axioms and print every violation.
    Validate { file: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum ExampleName {
    /// Anti-diagonal and horizontal cycles on the 3×3 torus.
    Figure1,
    /// A surface and a curve on the 3×3×3 torus.
    T3,
}

fn emit(out: Option<&Path>, s: &str) -> Res<()> {
    match out {
        Some(p) => fs::write(p, s)?,
        None => match writeln!(io::stdout(), "{s}") {
            Err(e) if e.kind() == io::ErrorKind::BrokenPipe => {}
            r => r?,
        },
    }
    Ok(())
}

fn load_complex(p: &Path) -> Res<CubicalComplex> {
    Ok(CubicalComplex::from_json(&fs::read_to_string(p)?)?)
}

fn load_geo(c: &CubicalComplex, p: &Path) -> Res<GeoCochain> {
    Ok(GeoCochain::from_json(c, &fs::read_to_string(p)?)?)
}

fn parse_grid(s: &str) -> Res<Vec<f64>> {
    let parts: Vec<f64> = s.split(':').map(str::parse).collect::<Result<_, _>>()?;
    let (a, b, step) = match parts[..] {
        [a, b, step] => (a, b, step),
        [a, b] => (a, b, 1.0),
        [a] => (a, a, 1.0),
        _ => return Err("t grid must be start:stop:step".into()),
    };
    if !(step > 0.0) || b < a {
        return Err("t grid needs start <= stop and a positive step".into());
    }
    let n = ((b - a) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|k| a + k as f64 * step).collect())
}

fn run(cli: Cli) -> Res<ExitCode> {
    match cli.cmd {
        Cmd::Complex { cmd } => match cmd {
            ComplexCmd::Torus { dims, out } => emit(out.as_deref(), &build_torus_grid(&dims)?.to_json())?,
            ComplexCmd::Cube { n, out } => emit(out.as_deref(), &CubicalComplex::standard_cube(n)?.to_json())?,
            ComplexCmd::Validate { file } => {
                let raw: RawComplex = serde_json::from_str(&fs::read_to_string(file)?)?;
                let rep = validate(&raw);
                if rep.is_valid() {
                    println!("valid");
                } else {
                    print!("{rep}");
                    return Ok(ExitCode::FAILURE);
                }
            }
        },
        Cmd::Cup { a, b, complex, out } => {
            let c = load_complex(&complex)?;
            let a = IntCochain::from_json(&c, &fs::read_to_string(a)?)?;
            let b = IntCochain::from_json(&c, &fs::read_to_string(b)?)?;
            emit(out.as_deref(), &cup(&c, &a, &b).to_json())?;
        }
        Cmd::Cohomology { complex } => {
            let c = load_complex(&complex)?;
            println!("degree,betti,torsion");
            for g in cohomology(&c) {
                let tors: Vec<String> = g.torsion.iter().map(ToString::to_string).collect();
                println!("{},{},{}", g.degree, g.betti, tors.join(" "));
            }
        }
        Cmd::Intersect { w, complex, out, chain_map } => {
            let c = load_complex(&complex)?;
            let w = load_geo(&c, &w)?;
            let rep = validate_transverse(&c, &w);
            if !rep.is_ok() {
                return Err(format!("geometric cochain is not transverse:\n{rep}").into());
            }
            emit(out.as_deref(), &intersect_cochain(&c, &w)?.to_json())?;
            if chain_map {
                let check = chain_map_check(&c, &w)?;
                eprint!("{check}");
                if !check.holds() {
                    return Ok(ExitCode::FAILURE);
                }
            }
        }
        Cmd::Flow { w, t, complex, out } => {
            let c = load_complex(&complex)?;
            emit(out.as_deref(), &load_geo(&c, &w)?.flowed(t).to_json())?;
        }
        Cmd::VerifyMain { complex, w, v, t_grid, out } => {
            let c = load_complex(&complex)?;
            let (w, v) = (load_geo(&c, &w)?, load_geo(&c, &v)?);
            for (name, g) in [("W", &w), ("V", &v)] {
                let rep = validate_transverse(&c, g);
                if !rep.is_ok() {
                    return Err(format!("{name} is not transverse:\n{rep}").into());
                }
            }
            let cfg = ProductConfig::with_grid(parse_grid(&t_grid)?);
            let rep = threshold_sweep(&c, &w, &v, &cfg)?;
            let json = out.as_ref().is_some_and(|p| p.extension().is_some_and(|e| e == "json"));
            emit(out.as_deref(), if json { rep.to_json() } else { rep.to_csv() }.trim_end())?;
            match rep.t_found {
                Some(t) => eprintln!("T_found = {t}, stable: {}, flow invariant: {}", rep.is_stable(), rep.flow_invariant),
                None => {
                    eprintln!("no threshold on the grid");
                    return Ok(ExitCode::FAILURE);
                }
            }
        }
        Cmd::Example { name, out_dir } => {
            fs::create_dir_all(&out_dir)?;
            let (c, (w, v)) = match name {
                ExampleName::Figure1 => {
                    let c = build_torus_grid(&FIGURE1_DIMS)?;
                    let wv = figure1(&c)?;
                    (c, wv)
                }
                ExampleName::T3 => {
                    let c = build_torus_grid(&T3_DIMS)?;
                    let wv = t3_experiment(&c)?;
                    (c, wv)
                }
            };
            fs::write(out_dir.join("complex.json"), c.to_json())?;
            fs::write(out_dir.join("W.json"), w.to_json())?;
            fs::write(out_dir.join("V.json"), v.to_json())?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

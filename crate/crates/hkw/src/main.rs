use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use hkw::diagram::Diagram;
use hkw::error::{Error, Result};
use hkw::filtered;
use hkw::jones;
use hkw::local::Locals;
use hkw::moves::{apply_sequence, MoveScalars, MoveSequence};
use hkw::poly::Q;
use hkw::report::{self, Format};
use hkw::verify;
use hkw::Potential;

#[derive(Parser)]
#[command(
    name = "hkw",
    version,
    about = "Perturbed sl(n) Khovanov-Rozansky homology and slice genus bounds"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Bigraded table of the filtered homology plus canonical generators.
    Homology(Common),
    /// Slice genus lower bound from the top filtration degree at i = 0.
    Bound {
        #[command(flatten)]
        common: Common,
        /// Use the positive-diagram shortcut instead of computing the homology.
        #[arg(long)]
        fast: bool,
    },
    /// Slice genus of the torus knot T(p, q) by the positive fast path.
    Milnor {
        p: usize,
        q: usize,
        /// Also compute the full homology and compare.
        #[arg(long)]
        confirm: bool,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 8)]
        max_crossings: usize,
    },
    /// Run the internal consistency checks on a diagram.
    Verify(Common),
    /// Kauffman-bracket P_2 of a diagram.
    OracleJones(Common),
    /// Track a canonical generator through a move-sequence file and audit the degrees.
    Moves {
        /// One move per line: handle0, handle1 merge i j, handle1 split i, handle2 i, R1.1 i, ...
        file: String,
        /// Root index per component, comma separated.
        #[arg(long)]
        psi: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, allow_hyphen_values = true)]
        roots: Option<String>,
    },
}

#[derive(Copy, Clone, ValueEnum)]
enum Fmt {
    Text,
    Structured,
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    n: Option<usize>,
    /// Roots of dw, comma separated rationals; defaults to 1..n.
    #[arg(long, allow_hyphen_values = true)]
    roots: Option<String>,
    /// File with a PD code.
    #[arg(long, conflicts_with = "preset")]
    pd: Option<String>,
    #[arg(long)]
    preset: Option<String>,
    #[arg(long, default_value_t = 8)]
    max_crossings: usize,
    #[arg(long)]
    out: Option<String>,
    #[arg(long, value_enum, default_value_t = Fmt::Text)]
    format: Fmt,
}

fn potential(n: Option<usize>, roots: &Option<String>) -> Result<Potential> {
    let pot = match roots {
        Some(r) => {
            let roots = r
                .split(',')
                .map(|x| {
                    x.trim()
                        .parse::<Q>()
                        .map_err(|_| Error::Validation(format!("bad root {x:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            if let Some(n) = n {
                if n != roots.len() {
                    return Err(Error::Validation(format!("--n {n} but {} roots given", roots.len())));
                }
            }
            Potential::new(roots)?
        }
        None => Potential::standard(n.unwrap_or(2)),
    };
    if pot.n < 2 {
        return Err(Error::Validation("n must be at least 2".into()));
    }
    Ok(pot)
}

impl Common {
    fn potential(&self) -> Result<Potential> {
        potential(self.n, &self.roots)
    }

    fn diagram(&self) -> Result<Diagram> {
        let d = match (&self.pd, &self.preset) {
            (Some(path), _) => Diagram::parse(&std::fs::read_to_string(path)?)?,
            (None, Some(name)) => Diagram::preset(name)?,
            (None, None) => return Err(Error::Validation("give --preset NAME or --pd FILE".into())),
        };
        if d.crossings.len() > self.max_crossings {
            return Err(Error::Validation(format!(
                "{} crossings exceed --max-crossings {}",
                d.crossings.len(),
                self.max_crossings
            )));
        }
        Ok(d)
    }

    fn fmt(&self) -> Format {
        match self.format {
            Fmt::Text => Format::Text,
            Fmt::Structured => Format::Structured,
        }
    }

    fn emit(&self, s: &str) -> Result<()> {
        match &self.out {
            Some(p) => std::fs::write(p, s)?,
            None => print!("{s}"),
        }
        Ok(())
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.cmd {
        Cmd::Homology(c) => {
            let (pot, d) = (c.potential()?, c.diagram()?);
            let h = filtered::homology(&d, &Locals::new(&pot), c.max_crossings)?;
            c.emit(&report::homology(&h, &pot, &d.to_pd(), c.fmt()))
        }
        Cmd::Bound { common: c, fast } => {
            let (pot, d) = (c.potential()?, c.diagram()?);
            let b = if fast {
                filtered::positive_fast_path(&d, pot.n)?.0
            } else {
                filtered::slice_bound(&filtered::homology(&d, &Locals::new(&pot), c.max_crossings)?)?
            };
            c.emit(&report::bound(&b, c.fmt()))
        }
        Cmd::Milnor {
            p,
            q,
            confirm,
            n,
            max_crossings,
        } => {
            let g = filtered::milnor(p, q)?;
            println!("g*={g}");
            if confirm {
                let d = Diagram::torus(p, q)?;
                let h = filtered::homology(&d, &Locals::new(&Potential::standard(n)), max_crossings)?;
                let b = filtered::slice_bound(&h)?;
                println!("{}", b.render());
                if b.value != Q::from_integer((g as i64).into()) {
                    return Err(Error::Invariant(format!(
                        "full homology bound {} differs from {g}",
                        b.bound
                    )));
                }
            }
            Ok(())
        }
        Cmd::Verify(c) => {
            let (pot, d) = (c.potential()?, c.diagram()?);
            let lines = verify::run(&d, &pot, c.max_crossings)?;
            c.emit(&(lines.join("\n") + "\n"))
        }
        Cmd::Moves { file, psi, n, roots } => {
            let pot = potential(n, &roots)?;
            let seq: MoveSequence = std::fs::read_to_string(&file)?.parse()?;
            let psi = psi
                .split(',')
                .map(|x| {
                    x.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::Validation(format!("bad root index {x:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            let sc = MoveScalars::new(&Locals::new(&pot))?;
            let (out, degree, steps) = apply_sequence(&sc, &seq, &psi)?;
            for s in &steps {
                println!("{:<20} degree {:>4}  terms {}", s.mv.to_string(), s.degree, s.terms);
            }
            for (p, c) in &out {
                println!(
                    "{c} * psi({})",
                    p.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(",")
                );
            }
            println!("total degree {degree}");
            Ok(())
        }
        Cmd::OracleJones(c) => {
            let d = c.diagram()?;
            let p = jones::p2(&d)?;
            match c.fmt() {
                Format::Text => c.emit(&format!("{}\n", jones::render(&p))),
                Format::Structured => {
                    let terms: Vec<(i64, i64)> = p.into_iter().collect();
                    c.emit(&(serde_json::to_string(&serde_json::json!({ "p2": terms })).expect("json") + "\n"))
                }
            }
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("hkw: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use g2trac_core::family::{definite_model, qm_package, FamilyParams};
use g2trac_core::json::{mat_to_json, parse_form, tensor_to_json, to_string, TensorJson};
use g2trac_core::monge::{default_points, monge_check, parse_poly};
use g2trac_core::package::GeometryPackage;
use g2trac_core::report::{default_samples, orbit_report, parse_samples, verify_definite, verify_family};
use g2trac_core::scalar::{parse_rat, Rat};
use g2trac_core::stable::{classify6, eps_complex_from_3form, metric_from_3form7, Class7};
use g2trac_core::Error;

const SAMPLES_VAR: &str = "G2TRAC_SAMPLES";

#[derive(Parser)]
#[command(
    name = "g2trac",
    version,
    about = "Exact checks for G2 and split G2 tractor geometries"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Model {
    /// The constant definite form on a flat chart
    Definite,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum What {
    Phi,
    H,
    J,
    All,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a constant 3-form in dimension 6 or 7
    ClassifyForm {
        #[arg(long)]
        file: std::path::PathBuf,
        #[arg(long, value_parser = ["6", "7"])]
        dim: Option<String>,
        #[arg(long, value_enum, default_value = "text")]
        report: Format,
    },
    /// Run every check on a member of the q^m family
    VerifyFamily {
        #[arg(
            long,
            allow_hyphen_values = true,
            required_unless_present = "model",
            conflicts_with = "model"
        )]
        m: Option<String>,
        #[arg(long, value_enum)]
        model: Option<Model>,
        #[arg(long, value_enum, default_value = "text")]
        report: Format,
    },
    /// Orbit and induced structure at the point ρ = S|S|
    Orbit {
        #[arg(long, allow_hyphen_values = true)]
        m: String,
        #[arg(long, allow_hyphen_values = true)]
        s: String,
        #[arg(long, value_enum, default_value = "text")]
        report: Format,
    },
    /// Growth vector of the Monge distribution for z' = F(x, y, y', y'', z)
    MongeCheck {
        #[arg(long)]
        poly: String,
        #[arg(long, value_enum, default_value = "text")]
        report: Format,
    },
    /// Print Φ, H and J of a package as JSON tensors
    Export {
        #[arg(
            long,
            allow_hyphen_values = true,
            required_unless_present = "model",
            conflicts_with = "model"
        )]
        m: Option<String>,
        #[arg(long, value_enum)]
        model: Option<Model>,
        #[arg(long, value_enum, default_value = "all")]
        what: What,
    },
}

#[derive(serde::Serialize)]
struct Export<'a> {
    label: &'a str,
    phi: TensorJson,
    h: TensorJson,
    j: TensorJson,
}

/// Exit status 2 for bad input, 1 for everything else.
fn fail(e: &Error) -> ExitCode {
    eprintln!("error: {e}");
    match e {
        Error::Internal(_) | Error::NoExactRoot(_) => ExitCode::from(1),
        _ => ExitCode::from(2),
    }
}

/// Write to stdout, ignoring a closed pipe.
fn emit(s: &str) {
    let _ = std::io::stdout().lock().write_all(s.as_bytes());
}

fn emit_line(s: &str) {
    emit(s);
    emit("\n");
}

fn status(pass: bool) -> ExitCode {
    if pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn samples() -> Result<Vec<Rat>, Error> {
    match std::env::var(SAMPLES_VAR) {
        Ok(v) => parse_samples(&v),
        Err(_) => Ok(default_samples()),
    }
}

fn package(m: Option<&str>) -> Result<GeometryPackage, Error> {
    match m {
        Some(m) => qm_package(&FamilyParams::parse(m)?),
        None => definite_model(),
    }
}

fn classify(file: &std::path::Path, dim: Option<usize>, report: Format) -> Result<ExitCode, Error> {
    let text = std::fs::read_to_string(file).map_err(|e| Error::Parse(format!("{}: {e}", file.display())))?;
    let form = parse_form(&text)?;
    if let Some(d) = dim {
        if d != form.dim() {
            return Err(Error::DimMismatch {
                expected: d,
                got: form.dim(),
            });
        }
    }
    let (value, ok) = match form.dim() {
        6 => {
            let c = classify6(&form)?;
            let mut v = json!({
                "dim": 6,
                "class": format!("beta{}", c.class.index()),
                "stable": c.class.is_stable(),
                "lambda": c.lambda.to_string(),
                "annihilator_dim": c.kernel_dim,
            });
            if c.class.is_stable() {
                match eps_complex_from_3form(&form, 1) {
                    Ok(ec) => {
                        v["eps"] = json!(ec.eps);
                        v["volume"] = json!(ec.vol.to_string());
                    }
                    Err(e) => v["eps_complex"] = json!(e.to_string()),
                }
            }
            (v, c.class.is_stable())
        }
        7 => {
            let m = metric_from_3form7(&form)?;
            let ok = m.class != Class7::Degenerate;
            let v = json!({
                "dim": 7,
                "class": format!("{:?}", m.class).to_lowercase(),
                "signature": m.signature,
                "h": m.h.as_ref().map(|h| (0..7).map(|i| h.row(i).iter().map(ToString::to_string).collect::<Vec<_>>()).collect::<Vec<_>>()),
                "volume": m.vol.as_ref().map(ToString::to_string),
                "contraction_identity": m.contraction_identity,
            });
            (v, ok)
        }
        d => return Err(Error::DimMismatch { expected: 7, got: d }),
    };
    match report {
        Format::Json => emit_line(&serde_json::to_string_pretty(&value).expect("json")),
        Format::Text => {
            for (k, v) in value.as_object().expect("object") {
                emit_line(&format!("{k}: {v}"));
            }
        }
    }
    if !ok {
        eprintln!("degenerate form");
    }
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(2) })
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::ClassifyForm { file, dim, report } => classify(&file, dim.map(|d| d.parse().expect("6 or 7")), report),
        Command::VerifyFamily { m, model: _, report } => {
            let samples = samples()?;
            let rep = match m {
                Some(m) => verify_family(&FamilyParams::parse(&m)?, &samples)?,
                None => verify_definite(&samples)?,
            };
            match report {
                Format::Text => emit(&rep.to_text()),
                Format::Json => emit_line(&rep.to_json()),
            }
            Ok(status(rep.all_pass()))
        }
        Command::Orbit { m, s, report } => {
            let rep = orbit_report(&FamilyParams::parse(&m)?, &parse_rat(&s)?)?;
            match report {
                Format::Text => emit(&rep.to_text()),
                Format::Json => emit_line(&serde_json::to_string_pretty(&rep).expect("json")),
            }
            Ok(status(rep.pass))
        }
        Command::MongeCheck { poly, report } => {
            let rep = monge_check(&parse_poly(&poly)?, &default_points());
            match report {
                Format::Json => emit_line(&serde_json::to_string_pretty(&rep).expect("json")),
                Format::Text => {
                    emit_line(&format!("F = {}", rep.poly));
                    for s in &rep.samples {
                        let g = s.growth;
                        emit_line(&format!(
                            "  at ({}): growth ({},{},{}), F_qq = {}",
                            s.point.join(", "),
                            g[0],
                            g[1],
                            g[2],
                            s.f_qq
                        ));
                    }
                    emit_line(&format!("generic (2,3,5): {}", rep.is235));
                }
            }
            Ok(status(rep.is235))
        }
        Command::Export { m, model: _, what } => {
            let pkg = package(m.as_deref())?;
            let phi = tensor_to_json(&pkg.phi);
            let h = mat_to_json(&pkg.h, true);
            let j = mat_to_json(&pkg.jfield().j, false);
            let text = match what {
                What::Phi => to_string(&phi),
                What::H => to_string(&h),
                What::J => to_string(&j),
                What::All => serde_json::to_string(&Export {
                    label: &pkg.label,
                    phi,
                    h,
                    j,
                })
                .expect("json"),
            };
            emit_line(&text);
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    run(cli).unwrap_or_else(|e| fail(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cli_definition() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}

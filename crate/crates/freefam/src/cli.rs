//! Command-line front end: every library operation as a subcommand with
//! JSON or CSV output suitable for scripting and plotting.

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::Value;

use crate::cumulants::{
    admissibility_report, cumulants_from_variance, transform_cumulants, variance_from_cumulants,
    AdmissibilityConfig, CumulantAction, CumulantSequence, RationalVarianceFunction,
};
use crate::freeconv::{clt_cumulants, mp_approximation, reproductive_family};
use crate::measures::{family_member, meixner_measure, semicircle_measure, MeixnerParams};
use crate::moments::{cumulants_from_moments, moments_from_cumulants, MomentSequence};
use crate::{Error, Result};

/// Shared configuration resolved from the global flags.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CliConfig {
    pub order: usize,
    pub quad_nodes: usize,
    pub tol: f64,
    pub output: OutputFormat,
    pub m0: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

/// Result of one CLI invocation; `code` follows the convention 0 = success,
/// 2 = validation error, 1 = internal error.
#[derive(Debug, Clone, PartialEq)]
pub struct CliOutcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Parser, Debug)]
#[command(name = "freefam", version, about = "free exponential family toolkit")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Truncation order for series and cumulant computations.
    #[arg(long, global = true, env = "FREEFAM_ORDER")]
    order: Option<usize>,
    /// Total Gauss-Legendre node budget for quadrature.
    #[arg(long, global = true)]
    quad_nodes: Option<usize>,
    /// Numerical tolerance for admissibility checks.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Output format.
    #[arg(long, global = true, value_enum)]
    output: Option<OutputFormat>,
    /// Anchor mean of the family.
    #[arg(long, global = true)]
    m0: Option<f64>,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Free cumulants of the generator of the family with variance function
    /// num/den.
    Cumulants {
        #[arg(long, value_delimiter = ',', required = true)]
        num: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "1")]
        den: Vec<f64>,
    },
    /// Taylor coefficients of the variance function recovered from cumulants.
    Variance {
        #[arg(long, value_delimiter = ',', required = true)]
        cumulants: Vec<f64>,
    },
    /// Convert cumulants to moments or moments to cumulants.
    Moments {
        #[arg(long, value_delimiter = ',', conflicts_with = "moments")]
        cumulants: Option<Vec<f64>>,
        #[arg(long, value_delimiter = ',')]
        moments: Option<Vec<f64>>,
    },
    /// Admissibility report for a candidate variance function.
    Check {
        #[arg(long, value_delimiter = ',', required = true)]
        num: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "1")]
        den: Vec<f64>,
        /// Half-width of the z-map sampling window.
        #[arg(long)]
        window: Option<f64>,
    },
    /// Free Meixner law for (a, b): atoms as JSON, then the density as CSV.
    Meixner {
        #[arg(long, allow_hyphen_values = true)]
        a: f64,
        #[arg(long, allow_hyphen_values = true)]
        b: f64,
        #[arg(long, default_value_t = 200)]
        resolution: usize,
    },
    /// Density CSV of the family member with mean m.
    Family {
        /// Generator: "semicircle" or "meixner".
        #[arg(long, default_value = "semicircle")]
        generator: String,
        #[arg(long, value_delimiter = ',', required = true)]
        num: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "1")]
        den: Vec<f64>,
        #[arg(long, allow_hyphen_values = true)]
        m: f64,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
        a: f64,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
        b: f64,
        #[arg(long, default_value_t = 200)]
        resolution: usize,
    },
    /// Cumulants of the dilated free convolution power (reproductive family).
    Power {
        #[arg(long, value_delimiter = ',', required = true)]
        num: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "1")]
        den: Vec<f64>,
        #[arg(long)]
        lambda: f64,
        /// Allow powers below 1 (formal cumulant arithmetic only).
        #[arg(long)]
        formal: bool,
    },
    /// Free convolution: component-wise cumulant sum.
    Convolve {
        #[arg(long, value_delimiter = ',', required = true)]
        left: Vec<f64>,
        #[arg(long, value_delimiter = ',', required = true)]
        right: Vec<f64>,
    },
    /// Cumulants after the free CLT scaling D_{sqrt n}(nu^{boxplus n}).
    Clt {
        #[arg(long, value_delimiter = ',', required = true)]
        cumulants: Vec<f64>,
        #[arg(long)]
        n: usize,
    },
    /// Marchenko-Pastur approximation experiment over a lambda grid.
    MpApprox {
        #[arg(long, value_delimiter = ',', required = true)]
        num: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "1")]
        den: Vec<f64>,
        #[arg(long, allow_hyphen_values = true)]
        m: f64,
        #[arg(long, value_delimiter = ',', default_value = "100,1000,10000")]
        lambdas: Vec<f64>,
    },
}

/// Runs the CLI on an argv slice (the program name included) and captures
/// the outcome instead of touching the process.
pub fn run<I, S>(argv: I) -> CliOutcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are successes per clap conventions.
            if e.use_stderr() {
                return CliOutcome { code: 2, stdout: String::new(), stderr: e.to_string() };
            }
            return CliOutcome { code: 0, stdout: e.to_string(), stderr: String::new() };
        }
    };
    let config = CliConfig {
        order: cli.order.unwrap_or(16),
        quad_nodes: cli.quad_nodes.unwrap_or(2000),
        tol: cli.tol.unwrap_or(1e-10),
        output: cli.output.unwrap_or(OutputFormat::Json),
        m0: cli.m0.unwrap_or(0.0),
    };
    if config.order < 4 || config.quad_nodes < 64 || !(config.tol > 0.0) {
        return CliOutcome {
            code: 2,
            stdout: String::new(),
            stderr: "invalid configuration: need order >= 4, quad-nodes >= 64, tol > 0"
                .into(),
        };
    }
    match dispatch(&cli.cmd, &config) {
        Ok(stdout) => CliOutcome { code: 0, stdout, stderr: String::new() },
        Err(e) => CliOutcome {
            code: exit_code(&e),
            stdout: String::new(),
            stderr: e.to_string(),
        },
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::MassCheck(_) | Error::NonFinite => 1,
        _ => 2,
    }
}

fn dispatch(cmd: &Cmd, config: &CliConfig) -> Result<String> {
    match cmd {
        Cmd::Cumulants { num, den } => {
            let v = RationalVarianceFunction::new(num.clone(), den.clone(), config.m0)?;
            let c = cumulants_from_variance(&v, config.order)?;
            Ok(emit_numbers(c.values(), config.output))
        }
        Cmd::Variance { cumulants } => {
            let c = CumulantSequence::new(cumulants.clone())?;
            let series = variance_from_cumulants(&c, c.order())?;
            Ok(emit_numbers(series.coeffs(), config.output))
        }
        Cmd::Moments { cumulants, moments } => match (cumulants, moments) {
            (Some(c), None) => {
                let c = CumulantSequence::new(c.clone())?;
                let m = moments_from_cumulants(&c, c.order())?;
                Ok(emit_numbers(m.values(), config.output))
            }
            (None, Some(m)) => {
                let m = MomentSequence::new(m.clone())?;
                let c = cumulants_from_moments(&m, m.order())?;
                Ok(emit_numbers(c.values(), config.output))
            }
            _ => Err(Error::InvalidArgument(
                "pass exactly one of --cumulants or --moments".into(),
            )),
        },
        Cmd::Check { num, den, window } => {
            let v = RationalVarianceFunction::new(num.clone(), den.clone(), config.m0)?;
            let report_config = AdmissibilityConfig {
                window: *window,
                hankel_tol: config.tol.max(1e-12),
                ..AdmissibilityConfig::default()
            };
            let report = admissibility_report(&v, &report_config)?;
            let value = serde_json::to_value(&report).expect("report serialize");
            Ok(render_json(&value))
        }
        Cmd::Meixner { a, b, resolution } => {
            let nu = meixner_measure(MeixnerParams::new(*a, *b)?)?
                .with_quad_nodes(config.quad_nodes);
            let atoms = serde_json::to_value(nu.atoms()).expect("atoms serialize");
            let mut out = render_json(&atoms);
            out.push('\n');
            out.push_str(&nu.density_csv(*resolution));
            Ok(out)
        }
        Cmd::Family { generator, num, den, m, a, b, resolution } => {
            let v = RationalVarianceFunction::new(num.clone(), den.clone(), config.m0)?;
            let nu = match generator.as_str() {
                "semicircle" => {
                    semicircle_measure(config.m0, v.eval(config.m0).sqrt())?
                }
                "meixner" => meixner_measure(MeixnerParams::new(*a, *b)?)?,
                other => {
                    return Err(Error::InvalidArgument(format!(
                        "unknown generator '{other}'"
                    )))
                }
            }
            .with_quad_nodes(config.quad_nodes);
            let member = family_member(&nu, &v, *m)?;
            Ok(member.density_csv(*resolution))
        }
        Cmd::Power { num, den, lambda, formal } => {
            let v = RationalVarianceFunction::new(num.clone(), den.clone(), config.m0)?;
            let c = reproductive_family(&v, *lambda, config.order, *formal)?;
            Ok(emit_numbers(c.values(), config.output))
        }
        Cmd::Convolve { left, right } => {
            let order = left.len().max(right.len());
            let l = CumulantSequence::new(left.clone())?.resized(order);
            let r = CumulantSequence::new(right.clone())?.resized(order);
            let sum = transform_cumulants(&l, CumulantAction::Convolve(&r))?;
            Ok(emit_numbers(sum.values(), config.output))
        }
        Cmd::Clt { cumulants, n } => {
            let c = CumulantSequence::new(cumulants.clone())?;
            let scaled = clt_cumulants(&c, *n)?;
            Ok(emit_numbers(scaled.values(), config.output))
        }
        Cmd::MpApprox { num, den, m, lambdas } => {
            let v = RationalVarianceFunction::new(num.clone(), den.clone(), config.m0)?;
            let report = mp_approximation(&v, lambdas, *m, config.order.min(8))?;
            let value = serde_json::to_value(&report).expect("report serialize");
            Ok(render_json(&value))
        }
    }
}

fn emit_numbers(values: &[f64], output: OutputFormat) -> String {
    match output {
        OutputFormat::Json => {
            let body: Vec<String> = values.iter().map(|v| format_float(*v)).collect();
            format!("[{}]", body.join(","))
        }
        OutputFormat::Csv => {
            let mut out = String::from("index,value\n");
            for (i, v) in values.iter().enumerate() {
                out.push_str(&format!("{},{}\n", i + 1, format_float(*v)));
            }
            out
        }
    }
}

/// Shortest representation that round-trips; integral values print without a
/// trailing ".0".
fn format_float(v: f64) -> String {
    format!("{v}")
}

/// Compact JSON with the float convention of [`format_float`] applied to
/// every number.
pub fn render_json(value: &Value) -> String {
    match value {
        Value::Null => "null".into(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) => format_float(n.as_f64().expect("finite json number")),
        Value::String(s) => serde_json::to_string(s).expect("string serialize"),
        Value::Array(items) => {
            let body: Vec<String> = items.iter().map(render_json).collect();
            format!("[{}]", body.join(","))
        }
        Value::Object(map) => {
            let body: Vec<String> = map
                .iter()
                .map(|(k, v)| {
                    format!(
                        "{}:{}",
                        serde_json::to_string(k).expect("key serialize"),
                        render_json(v)
                    )
                })
                .collect();
            format!("{{{}}}", body.join(","))
        }
    }
}

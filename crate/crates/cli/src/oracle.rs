use std::fmt;
use std::str::FromStr;

use ample_core::field::FieldCtx;
use ample_core::paley::{example13, paley_graph, XnpOracle};
use ample_core::random::{HashComplexOracle, ProbProfile};
use ample_core::simplex::{ComplexView, ExplicitComplex};
use ample_core::{Error, Result};

/// A complex named on the command line.
#[derive(Clone, Debug, PartialEq)]
pub enum OracleSpec {
    File(String),
    Hash { n: u64, p: f64, dim: Option<usize>, seed: Option<u64> },
    Xnp { n: u64, p: u64, g: Option<u64>, dim: Option<usize> },
    Paley { q: u64 },
    Example13,
}

/// A loaded complex, explicit or answered per query.
pub enum Oracle {
    Explicit(ExplicitComplex),
    Hash(HashComplexOracle),
    Xnp(XnpOracle),
}

impl Oracle {
    pub fn view(&self) -> &dyn ComplexView {
        match self {
            Oracle::Explicit(x) => x,
            Oracle::Hash(o) => o,
            Oracle::Xnp(o) => o,
        }
    }

    pub fn explicit(&self) -> Option<&ExplicitComplex> {
        match self {
            Oracle::Explicit(x) => Some(x),
            _ => None,
        }
    }
}

fn fields(body: &str) -> Result<Vec<(&str, &str)>> {
    body.split(',')
        .map(|kv| kv.split_once('=').ok_or_else(|| Error::Format(format!("expected key=value, got `{kv}`"))))
        .collect()
}

fn num<T: FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse().map_err(|_| Error::Format(format!("bad value `{v}` for `{key}`")))
}

impl FromStr for OracleSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "example13" {
            return Ok(OracleSpec::Example13);
        }
        let (scheme, body) = s.split_once(':').ok_or_else(|| Error::Format(format!("unknown oracle `{s}`")))?;
        match scheme {
            "file" if !body.is_empty() => Ok(OracleSpec::File(body.to_string())),
            "hash" => {
                let (mut n, mut p, mut dim, mut seed) = (None, None, None, None);
                for (k, v) in fields(body)? {
                    match k {
                        "n" => n = Some(num(k, v)?),
                        "p" => p = Some(num(k, v)?),
                        "dim" => dim = Some(num(k, v)?),
                        "seed" => seed = Some(num(k, v)?),
                        _ => return Err(Error::Format(format!("unknown hash key `{k}`"))),
                    }
                }
                let n = n.ok_or_else(|| Error::Format("hash oracle needs n".into()))?;
                Ok(OracleSpec::Hash { n, p: p.unwrap_or(0.5), dim, seed })
            }
            "xnp" => {
                let (mut n, mut p, mut g, mut dim) = (None, None, None, None);
                for (k, v) in fields(body)? {
                    match k {
                        "n" => n = Some(num(k, v)?),
                        "p" => p = Some(num(k, v)?),
                        "g" => g = Some(num(k, v)?),
                        "dim" => dim = Some(num(k, v)?),
                        _ => return Err(Error::Format(format!("unknown xnp key `{k}`"))),
                    }
                }
                match (n, p) {
                    (Some(n), Some(p)) => Ok(OracleSpec::Xnp { n, p, g, dim }),
                    _ => Err(Error::Format("xnp oracle needs n and p".into())),
                }
            }
            "paley" => match fields(body)?.as_slice() {
                [("q", v)] => Ok(OracleSpec::Paley { q: num("q", v)? }),
                _ => Err(Error::Format("expected paley:q=<prime>".into())),
            },
            _ => Err(Error::Format(format!("unknown oracle scheme `{scheme}`"))),
        }
    }
}

impl fmt::Display for OracleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleSpec::File(path) => write!(f, "file:{path}"),
            OracleSpec::Hash { n, p, dim, seed } => {
                write!(f, "hash:n={n},p={p}")?;
                if let Some(d) = dim {
                    write!(f, ",dim={d}")?;
                }
                if let Some(s) = seed {
                    write!(f, ",seed={s}")?;
                }
                Ok(())
            }
            OracleSpec::Xnp { n, p, g, dim } => {
                write!(f, "xnp:n={n},p={p}")?;
                if let Some(g) = g {
                    write!(f, ",g={g}")?;
                }
                if let Some(d) = dim {
                    write!(f, ",dim={d}")?;
                }
                Ok(())
            }
            OracleSpec::Paley { q } => write!(f, "paley:q={q}"),
            OracleSpec::Example13 => write!(f, "example13"),
        }
    }
}

impl OracleSpec {
    /// Loads the complex; `default_dim` applies to implicit oracles given without `dim`.
    pub fn load(&self, default_dim: usize) -> Result<Oracle> {
        Ok(match self {
            OracleSpec::File(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{path}: {e}")))?;
                Oracle::Explicit(ExplicitComplex::from_json(&text)?)
            }
            OracleSpec::Hash { n, p, dim, seed } => {
                let profile = ProbProfile::constant(*p)?;
                Oracle::Hash(HashComplexOracle::new(*n, &profile, dim.unwrap_or(default_dim), seed.unwrap_or(0))?)
            }
            OracleSpec::Xnp { n, p, g, dim } => {
                Oracle::Xnp(XnpOracle::new(FieldCtx::new(*n, *p, *g)?, dim.unwrap_or(default_dim))?)
            }
            OracleSpec::Paley { q } => Oracle::Explicit(paley_graph(*q)?),
            OracleSpec::Example13 => Oracle::Explicit(example13()),
        })
    }
}

/// `field:n=<n>,p=<p>[,g=<g>]`.
pub fn parse_field(s: &str) -> Result<FieldCtx> {
    let body = s.strip_prefix("field:").ok_or_else(|| Error::Format(format!("expected field:..., got `{s}`")))?;
    let (mut n, mut p, mut g) = (None, None, None);
    for (k, v) in fields(body)? {
        match k {
            "n" => n = Some(num(k, v)?),
            "p" => p = Some(num(k, v)?),
            "g" => g = Some(num(k, v)?),
            _ => return Err(Error::Format(format!("unknown field key `{k}`"))),
        }
    }
    match (n, p) {
        (Some(n), Some(p)) => FieldCtx::new(n, p, g),
        _ => Err(Error::Format("field needs n and p".into())),
    }
}

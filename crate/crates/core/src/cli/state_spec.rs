use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::RngStream;
use crate::mub::{build_complete_mub, Basis};
use crate::states::{epsilon_state, from_bloch, sample_random_density, BlochVector, DensityOperator};

pub const DEFAULT_STATE_SEED: u64 = 42;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StateKind {
    Epsilon,
    Bloch,
    MaximallyMixed,
    Random,
}

/// Textual state description: `kind:args`.
///
/// ```text
/// epsilon:d,eps[,j[,k]]     |b> = vector k of MUB basis j (default 0,0)
/// bloch:r1,r2,r3
/// maximally-mixed:d
/// random:d[,rank[,seed]]
/// ```
#[derive(Clone, Debug, PartialEq)]
pub struct StateSpec {
    pub kind: StateKind,
    pub d: usize,
    pub epsilon: Option<f64>,
    pub bloch: Option<[f64; 3]>,
    pub rank: Option<usize>,
    pub seed: Option<u64>,
    pub basis_index: Option<(usize, usize)>,
}

impl StateSpec {
    fn empty(kind: StateKind, d: usize) -> Self {
        Self {
            kind,
            d,
            epsilon: None,
            bloch: None,
            rank: None,
            seed: None,
            basis_index: None,
        }
    }

    pub fn build(&self) -> Result<DensityOperator> {
        match self.kind {
            StateKind::Epsilon => {
                let eps = self.epsilon.unwrap_or(0.0);
                let (j, k) = self.basis_index.unwrap_or((0, 0));
                if k >= self.d {
                    return Err(Error::InvalidState(format!(
                        "vector index {k} out of range for d={}",
                        self.d
                    )));
                }
                let b = if j == 0 {
                    let mut v = vec![Complex64::new(0.0, 0.0); self.d];
                    v[k] = Complex64::new(1.0, 0.0);
                    v
                } else {
                    let mubs = build_complete_mub(self.d)?;
                    mubs.bases()
                        .get(j)
                        .ok_or_else(|| {
                            Error::InvalidState(format!("basis index {j} out of range"))
                        })?
                        .vector(k)
                };
                epsilon_state(self.d, eps, &b)
            }
            StateKind::Bloch => {
                let [r1, r2, r3] = self.bloch.unwrap_or([0.0; 3]);
                from_bloch(BlochVector::new(r1, r2, r3))
            }
            StateKind::MaximallyMixed => DensityOperator::maximally_mixed(self.d),
            StateKind::Random => {
                let mut rng = RngStream::new(self.seed.unwrap_or(DEFAULT_STATE_SEED), 0);
                sample_random_density(self.d, self.rank.unwrap_or(self.d), &mut rng)
            }
        }
    }
}

fn parse_num<T: FromStr>(s: &str, what: &str) -> std::result::Result<T, String> {
    s.trim()
        .parse()
        .map_err(|_| format!("invalid {what} '{}'", s.trim()))
}

impl FromStr for StateSpec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let (kind, args) = s
            .split_once(':')
            .ok_or_else(|| format!("state '{s}' must look like kind:args"))?;
        let args: Vec<&str> = args.split(',').collect();
        let arity = |lo: usize, hi: usize| {
            if args.len() < lo || args.len() > hi {
                Err(format!(
                    "state kind '{kind}' takes {lo}..={hi} arguments, got {}",
                    args.len()
                ))
            } else {
                Ok(())
            }
        };
        let dim = |s: &str| -> std::result::Result<usize, String> {
            let d: usize = parse_num(s, "dimension")?;
            if d < 2 {
                return Err(format!("dimension must be at least 2, got {d}"));
            }
            Ok(d)
        };
        match kind {
            "epsilon" => {
                arity(2, 4)?;
                let mut spec = StateSpec::empty(StateKind::Epsilon, dim(args[0])?);
                spec.epsilon = Some(parse_num(args[1], "epsilon")?);
                if args.len() > 2 {
                    let j = parse_num(args[2], "basis index")?;
                    let k = match args.get(3) {
                        Some(k) => parse_num(k, "vector index")?,
                        None => 0,
                    };
                    spec.basis_index = Some((j, k));
                }
                Ok(spec)
            }
            "bloch" => {
                arity(3, 3)?;
                let mut spec = StateSpec::empty(StateKind::Bloch, 2);
                spec.bloch = Some([
                    parse_num(args[0], "Bloch component")?,
                    parse_num(args[1], "Bloch component")?,
                    parse_num(args[2], "Bloch component")?,
                ]);
                Ok(spec)
            }
            "maximally-mixed" => {
                arity(1, 1)?;
                Ok(StateSpec::empty(StateKind::MaximallyMixed, dim(args[0])?))
            }
            "random" => {
                arity(1, 3)?;
                let mut spec = StateSpec::empty(StateKind::Random, dim(args[0])?);
                if let Some(r) = args.get(1) {
                    spec.rank = Some(parse_num(r, "rank")?);
                }
                if let Some(seed) = args.get(2) {
                    spec.seed = Some(parse_num(seed, "seed")?);
                }
                Ok(spec)
            }
            other => Err(format!(
                "unknown state kind '{other}' (expected epsilon, bloch, maximally-mixed or random)"
            )),
        }
    }
}

impl fmt::Display for StateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            StateKind::Epsilon => {
                write!(f, "epsilon:{},{}", self.d, self.epsilon.unwrap_or(0.0))?;
                if let Some((j, k)) = self.basis_index {
                    write!(f, ",{j},{k}")?;
                }
                Ok(())
            }
            StateKind::Bloch => {
                let [a, b, c] = self.bloch.unwrap_or([0.0; 3]);
                write!(f, "bloch:{a},{b},{c}")
            }
            StateKind::MaximallyMixed => write!(f, "maximally-mixed:{}", self.d),
            StateKind::Random => {
                write!(f, "random:{}", self.d)?;
                if self.rank.is_some() || self.seed.is_some() {
                    write!(f, ",{}", self.rank.unwrap_or(self.d))?;
                }
                if let Some(seed) = self.seed {
                    write!(f, ",{seed}")?;
                }
                Ok(())
            }
        }
    }
}

/// Basis selector: `computational`, `mub:<j>` or `random`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasisSpec {
    Computational,
    Mub(usize),
    Random,
}

impl BasisSpec {
    pub fn build(self, d: usize, seed: u64) -> Result<Basis> {
        match self {
            BasisSpec::Computational => Ok(Basis::computational(d)),
            BasisSpec::Mub(j) => {
                let mubs = build_complete_mub(d)?;
                mubs.bases().get(j).cloned().ok_or_else(|| {
                    Error::InvalidState(format!("MUB index {j} out of range 0..={d}"))
                })
            }
            BasisSpec::Random => {
                let mut rng = RngStream::new(seed, 0);
                Basis::new(crate::linalg::sample_haar_unitary(d, &mut rng), "random".into())
            }
        }
    }
}

impl FromStr for BasisSpec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "computational" => Ok(BasisSpec::Computational),
            "random" => Ok(BasisSpec::Random),
            _ => match s.strip_prefix("mub:") {
                Some(j) => Ok(BasisSpec::Mub(parse_num(j, "MUB index")?)),
                None => Err(format!(
                    "unknown basis '{s}' (expected computational, mub:<j> or random)"
                )),
            },
        }
    }
}

impl fmt::Display for BasisSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisSpec::Computational => f.write_str("computational"),
            BasisSpec::Mub(j) => write!(f, "mub:{j}"),
            BasisSpec::Random => f.write_str("random"),
        }
    }
}

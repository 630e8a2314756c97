//! Target stabilizer states: presets and the plain-text target file.
//!
//! A target file is either
//!
//! ```text
//! n=3
//! +XXX
//! +ZZI
//! +IZZ
//! ```
//!
//! or a single `preset=<name(args)>` line. Blank lines and `#` comments are
//! ignored. Presets: `bell`, `ghz(n)`, `linear_cluster(n)`,
//! `grid_cluster(w,h)` and `graph(n;a-b,c-d,...)`.

use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{graph_state_generators, Graph};
use crate::group::StabilizerGroup;
use crate::pauli::{Pauli, PauliString, Sign};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TargetSource {
    Bell,
    Ghz(usize),
    LinearCluster(usize),
    GridCluster(usize, usize),
    Graph(Graph),
    Explicit,
}

impl fmt::Display for TargetSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TargetSource::Bell => write!(f, "bell"),
            TargetSource::Ghz(n) => write!(f, "ghz({n})"),
            TargetSource::LinearCluster(n) => write!(f, "linear_cluster({n})"),
            TargetSource::GridCluster(w, h) => write!(f, "grid_cluster({w},{h})"),
            TargetSource::Graph(g) => {
                let edges: Vec<String> = g.edges().map(|(a, b)| format!("{a}-{b}")).collect();
                write!(f, "graph({};{})", g.num_vertices(), edges.join(","))
            }
            TargetSource::Explicit => write!(f, "explicit"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TargetState {
    n: usize,
    generators: Vec<PauliString>,
    source: TargetSource,
}

/// `sign·X` on `photons` followed by the `Z Z` chain along `photons`.
pub fn ghz_generators(n: usize, photons: &[usize], sign: Sign) -> Vec<PauliString> {
    let mut gens = vec![PauliString::on_support(n, photons, Pauli::X).with_sign(sign)];
    gens.extend(
        photons
            .windows(2)
            .map(|w| PauliString::on_support(n, w, Pauli::Z)),
    );
    gens
}

impl TargetState {
    /// Validates a full-rank generating set: exactly `n` Hermitian,
    /// commuting, independent generators on `n` qubits.
    pub fn new(generators: Vec<PauliString>, source: TargetSource) -> Result<Self> {
        let n = generators.first().map(|g| g.len()).ok_or(Error::NoQubits)?;
        if n == 0 {
            return Err(Error::NoQubits);
        }
        StabilizerGroup::from_generators(n, &generators)?;
        if generators.len() != n {
            return Err(Error::GeneratorCount {
                expected: n,
                found: generators.len(),
            });
        }
        Ok(Self {
            n,
            generators,
            source,
        })
    }

    pub fn explicit(generators: Vec<PauliString>) -> Result<Self> {
        Self::new(generators, TargetSource::Explicit)
    }

    pub fn bell() -> Self {
        let gens = vec![crate::pauli::pauli("+XX"), crate::pauli::pauli("+ZZ")];
        Self {
            n: 2,
            generators: gens,
            source: TargetSource::Bell,
        }
    }

    pub fn ghz(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::NoQubits);
        }
        let photons: Vec<usize> = (0..n).collect();
        Ok(Self {
            n,
            generators: ghz_generators(n, &photons, Sign::Plus),
            source: TargetSource::Ghz(n),
        })
    }

    pub fn linear_cluster(n: usize) -> Result<Self> {
        let g = Graph::path(n)?;
        Ok(Self {
            n,
            generators: graph_state_generators(&g),
            source: TargetSource::LinearCluster(n),
        })
    }

    pub fn grid_cluster(width: usize, height: usize) -> Result<Self> {
        let g = Graph::grid(width, height)?;
        Ok(Self {
            n: width * height,
            generators: graph_state_generators(&g),
            source: TargetSource::GridCluster(width, height),
        })
    }

    pub fn graph(graph: Graph) -> Self {
        Self {
            n: graph.num_vertices(),
            generators: graph_state_generators(&graph),
            source: TargetSource::Graph(graph),
        }
    }

    /// Parses a preset such as `ghz(4)` or `grid_cluster(3,3)`.
    pub fn from_preset(text: &str) -> Result<Self> {
        let text = text.trim();
        let bad = |message: String| Error::Parse {
            position: 1,
            message,
        };
        let (name, args) = match text.split_once('(') {
            Some((name, rest)) => {
                let args = rest
                    .strip_suffix(')')
                    .ok_or_else(|| bad(format!("unclosed '(' in {text:?}")))?;
                (name.trim(), Some(args))
            }
            None => (text, None),
        };
        let ints = |args: Option<&str>, count: usize| -> Result<Vec<usize>> {
            let args =
                args.ok_or_else(|| bad(format!("preset {name} needs {count} argument(s)")))?;
            let vals: Vec<usize> = args
                .split(',')
                .map(|a| {
                    a.trim()
                        .parse()
                        .map_err(|_| bad(format!("bad integer {a:?} in {text:?}")))
                })
                .collect::<Result<_>>()?;
            if vals.len() != count {
                return Err(bad(format!(
                    "preset {name} needs {count} argument(s), got {}",
                    vals.len()
                )));
            }
            Ok(vals)
        };
        match name {
            "bell" if args.is_none() || args == Some("") => Ok(Self::bell()),
            "ghz" => Self::ghz(ints(args, 1)?[0]),
            "linear_cluster" => Self::linear_cluster(ints(args, 1)?[0]),
            "grid_cluster" => {
                let v = ints(args, 2)?;
                Self::grid_cluster(v[0], v[1])
            }
            "graph" => {
                let args = args.ok_or_else(|| bad("graph preset needs arguments".into()))?;
                let (count, edges) = args.split_once(';').unwrap_or((args, ""));
                let n: usize = count
                    .trim()
                    .parse()
                    .map_err(|_| bad(format!("bad vertex count {count:?}")))?;
                let edges = edges
                    .split(',')
                    .filter(|e| !e.trim().is_empty())
                    .map(|e| {
                        let (a, b) = e
                            .split_once('-')
                            .ok_or_else(|| bad(format!("bad edge {e:?}")))?;
                        let parse = |s: &str| {
                            s.trim()
                                .parse::<usize>()
                                .map_err(|_| bad(format!("bad edge {e:?}")))
                        };
                        Ok((parse(a)?, parse(b)?))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Self::graph(Graph::new(n, &edges)?))
            }
            _ => Err(bad(format!("unknown preset {text:?}"))),
        }
    }

    /// Parses the target file format.
    pub fn from_file_text(text: &str) -> Result<Self> {
        let mut declared_n = None;
        let mut preset = None;
        let mut gens = Vec::new();
        for (k, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let at_line = |e: Error| match e {
                Error::Parse { message, .. } => Error::Parse {
                    position: k + 1,
                    message: format!("line {}: {message}", k + 1),
                },
                other => other,
            };
            if let Some(v) = line.strip_prefix("n=") {
                let n: usize = v.trim().parse().map_err(|_| Error::Parse {
                    position: k + 1,
                    message: format!("line {}: bad qubit count {v:?}", k + 1),
                })?;
                declared_n = Some(n);
            } else if let Some(p) = line.strip_prefix("preset=") {
                preset = Some(Self::from_preset(p).map_err(at_line)?);
            } else {
                gens.push(line.parse::<PauliString>().map_err(at_line)?);
            }
        }
        let target = match (preset, gens.is_empty()) {
            (Some(t), true) => t,
            (Some(_), false) => {
                return Err(Error::Parse {
                    position: 1,
                    message: "file mixes a preset with explicit generators".into(),
                })
            }
            (None, false) => {
                if declared_n.is_none() {
                    return Err(Error::Parse {
                        position: 1,
                        message: "missing n=<count> line".into(),
                    });
                }
                Self::explicit(gens)?
            }
            (None, true) => {
                return Err(Error::Parse {
                    position: 1,
                    message: "no generators".into(),
                })
            }
        };
        if let Some(n) = declared_n {
            if n != target.n {
                return Err(Error::LengthMismatch {
                    left: n,
                    right: target.n,
                });
            }
        }
        Ok(target)
    }

    /// Accepts either a target file's contents or a bare preset string.
    pub fn parse(text: &str) -> Result<Self> {
        let is_file = text
            .lines()
            .map(str::trim)
            .any(|l| l.starts_with("n=") || l.starts_with("preset="));
        if is_file {
            Self::from_file_text(text)
        } else {
            Self::from_preset(text)
        }
    }

    /// Renders the explicit target file for this state.
    pub fn to_file_text(&self) -> String {
        let mut out = format!("n={}\n", self.n);
        for g in &self.generators {
            out.push_str(&g.to_string());
            out.push('\n');
        }
        out
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[PauliString] {
        &self.generators
    }

    pub fn source(&self) -> &TargetSource {
        &self.source
    }

    pub fn group(&self) -> StabilizerGroup {
        StabilizerGroup::from_generators(self.n, &self.generators)
            .expect("validated at construction")
    }

    /// Largest generator weight, before any fusion splitting.
    pub fn max_parity_weight(&self) -> usize {
        self.generators
            .iter()
            .map(PauliString::weight)
            .max()
            .unwrap_or(0)
    }
}

/// Parses a target file or preset string.
pub fn parse_target(text: &str) -> Result<TargetState> {
    TargetState::parse(text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::pauli;

    #[test]
    fn presets() {
        let b = parse_target("bell").unwrap();
        assert_eq!(b.generators(), &[pauli("+XX"), pauli("+ZZ")]);
        let g = parse_target("ghz(4)").unwrap();
        assert_eq!(g.max_parity_weight(), 4);
        assert_eq!(g.generators()[0], pauli("XXXX"));
        assert_eq!(
            parse_target("grid_cluster(3,3)")
                .unwrap()
                .max_parity_weight(),
            5
        );
        assert_eq!(
            parse_target("linear_cluster(5)")
                .unwrap()
                .max_parity_weight(),
            3
        );
        let t = parse_target("graph(3;0-1,1-2)").unwrap();
        assert_eq!(
            t.generators(),
            TargetState::linear_cluster(3).unwrap().generators()
        );
        assert_eq!(t.source().to_string(), "graph(3;0-1,1-2)");
        assert!(parse_target("ghz(x)").is_err());
        assert!(parse_target("torus(3)").is_err());
        assert!(parse_target("graph(2;0-0)").is_err());
    }

    #[test]
    fn explicit_validation() {
        assert!(matches!(
            TargetState::explicit(vec![pauli("+XX"), pauli("-XX")]),
            Err(Error::DependentGenerator(1))
        ));
        assert!(matches!(
            TargetState::explicit(vec![pauli("XI"), pauli("ZI")]),
            Err(Error::NonCommuting {
                first: 0,
                second: 1
            })
        ));
        assert!(matches!(
            TargetState::explicit(vec![pauli("XX")]),
            Err(Error::GeneratorCount {
                expected: 2,
                found: 1
            })
        ));
    }

    #[test]
    fn file_format() {
        let text = "n=3\n+XXX\n# chain\n+ZZI\n+IZZ\n";
        let t = parse_target(text).unwrap();
        assert_eq!(t.to_file_text(), "n=3\n+XXX\n+ZZI\n+IZZ\n");
        assert_eq!(parse_target("preset=ghz(5)\n").unwrap().num_qubits(), 5);
        assert!(matches!(
            parse_target("n=2\n+XQ\n+ZZ\n"),
            Err(Error::Parse { position: 2, .. })
        ));
        assert!(parse_target("n=3\n+XX\n+ZZ\n").is_err());
        assert!(parse_target("n=2\npreset=bell\n+XX\n").is_err());
    }
}

//! Plain-text `key = value` run configuration.
//!
//! Blank lines and `#` comments are ignored. `case` selects a shipped test and
//! its defaults; every other key overrides one default. Unknown keys, repeated
//! keys and malformed values are rejected with their line number.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::mesh::MeshSpec;
use crate::model::{ModelParams, Viscosity, Well};
use crate::scheme::{Case, NewtonSettings};

/// The shipped numerical experiments.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TestCase {
    /// 1D steady tanh profile
    Test1,
    /// random perturbation of the mixed state
    Test2,
    /// four bubbles in the unit square
    Test3,
    /// off-centre bubble in a rotating disk
    Test4,
    /// Rayleigh-Taylor instability
    Test5,
    /// 1D random data at a high density ratio
    Test6,
}

impl TestCase {
    pub const ALL: [TestCase; 6] = [TestCase::Test1, TestCase::Test2, TestCase::Test3, TestCase::Test4, TestCase::Test5, TestCase::Test6];
}

impl fmt::Display for TestCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let i = TestCase::ALL.iter().position(|c| c == self).expect("listed") + 1;
        write!(f, "test{i}")
    }
}

impl FromStr for TestCase {
    type Err = Error;

    fn from_str(s: &str) -> Result<TestCase> {
        TestCase::ALL
            .iter()
            .find(|c| c.to_string() == s)
            .copied()
            .ok_or_else(|| Error::UnknownCase(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TimeStep {
    Fixed(f64),
    /// `k = h^2` with `h` the element length of an interval mesh
    MeshSquared,
}

impl fmt::Display for TimeStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TimeStep::Fixed(k) => write!(f, "{k:e}"),
            TimeStep::MeshSquared => write!(f, "h^2"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub case: TestCase,
    pub initial: Case,
    pub mesh: MeshSpec,
    pub degree: usize,
    pub timestep: TimeStep,
    pub t_final: f64,
    pub params: ModelParams,
    pub newton: NewtonSettings,
    /// write a snapshot every this many steps (and at the end); 0 disables
    pub snapshot_every: usize,
}

impl RunConfig {
    /// Defaults of a shipped case.
    pub fn defaults(case: TestCase) -> RunConfig {
        let mut params = ModelParams::default();
        let (initial, mesh, t_final) = match case {
            TestCase::Test1 => (Case::SteadyTanh, "interval -1 1 200", 1.0),
            TestCase::Test2 => (Case::Random { seed: 1, amplitude: 0.01 }, "rectangle -1 1 -1 1 40 40", 1.0),
            TestCase::Test3 => (Case::Bubbles, "rectangle 0 1 0 1 40 40", 1.0),
            TestCase::Test4 => {
                params.omega = 1.0;
                params.viscosity = Viscosity::Tensor { eta1: 0.001, eta2: 0.005 };
                (Case::RotatingBubble, "disk 1 16", 1.0)
            }
            TestCase::Test5 => {
                params.gravity = [0.0, -0.01];
                (Case::RayleighTaylor, "rectangle -1 1 -2 2 20 40", 1.0)
            }
            TestCase::Test6 => {
                params.rho2 = 10.0;
                params.well = Well::Modified { a: 100.0 };
                (Case::Random { seed: 1, amplitude: 0.01 }, "interval -1 1 200", 1.0)
            }
        };
        RunConfig {
            case,
            initial,
            mesh: mesh.parse().expect("valid default mesh"),
            degree: 1,
            timestep: TimeStep::Fixed(0.01),
            t_final,
            params,
            newton: NewtonSettings::default(),
            snapshot_every: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        self.newton.validate()?;
        if self.degree == 0 || 4 * self.degree + 10 > crate::dgspace::MAX_DEGREE {
            return Err(Error::Domain(format!("degree must lie in 1..={}, got {}", (crate::dgspace::MAX_DEGREE - 10) / 4, self.degree)));
        }
        if !(self.t_final > 0.0 && self.t_final.is_finite()) {
            return Err(Error::Domain(format!("t_final must be positive, got {}", self.t_final)));
        }
        match self.timestep {
            TimeStep::Fixed(k) if !(k > 0.0 && k.is_finite()) => {
                return Err(Error::Domain(format!("k must be positive, got {k}")));
            }
            TimeStep::MeshSquared if self.mesh.dim() != 1 => {
                return Err(Error::Domain("k = h^2 needs an interval mesh".into()));
            }
            _ => {}
        }
        if self.params.omega != 0.0 && self.mesh.dim() != 2 {
            return Err(Error::UnsupportedDimension("rotation", self.mesh.dim()));
        }
        Ok(())
    }

    /// Element length of an interval mesh.
    pub fn interval_h(&self) -> Option<f64> {
        match self.mesh {
            MeshSpec::Interval { a, b, n } => Some((b - a) / n as f64),
            _ => None,
        }
    }

    /// Time step length for this configuration.
    pub fn step_size(&self) -> Result<f64> {
        match self.timestep {
            TimeStep::Fixed(k) => Ok(k),
            TimeStep::MeshSquared => self
                .interval_h()
                .map(|h| h * h)
                .ok_or_else(|| Error::Domain("k = h^2 needs an interval mesh".into())),
        }
    }

    /// The same configuration on an interval mesh with `n` elements.
    pub fn with_resolution(&self, n: usize) -> Result<RunConfig> {
        let mut c = self.clone();
        c.mesh = match self.mesh {
            MeshSpec::Interval { a, b, .. } => MeshSpec::Interval { a, b, n },
            _ => return Err(Error::Domain("refinement levels need an interval mesh".into())),
        };
        Ok(c)
    }

    /// Text that [`parse_config`] maps back to an equal configuration.
    pub fn to_text(&self) -> String {
        let p = &self.params;
        let mut lines = vec![
            format!("case = {}", self.case),
            format!("initial = {}", self.initial),
            format!("mesh = {}", self.mesh),
            format!("degree = {}", self.degree),
            format!("k = {}", self.timestep),
            format!("t_final = {:e}", self.t_final),
            format!("rho1 = {:e}", p.rho1),
            format!("rho2 = {:e}", p.rho2),
            format!("gamma = {:e}", p.gamma),
        ];
        match p.viscosity {
            Viscosity::Simplified { eta } => {
                lines.push("viscosity = simplified".into());
                lines.push(format!("eta = {eta:e}"));
            }
            Viscosity::Tensor { eta1, eta2 } => {
                lines.push("viscosity = tensor".into());
                lines.push(format!("eta1 = {eta1:e}"));
                lines.push(format!("eta2 = {eta2:e}"));
            }
        }
        lines.push(format!("m_j = {:e}", p.m_j));
        lines.push(format!("m_r = {:e}", p.m_r));
        lines.push(match p.sigma {
            Some(s) => format!("sigma = {s:e}"),
            None => "sigma = auto".into(),
        });
        match p.well {
            Well::Quartic => lines.push("well = quartic".into()),
            Well::Modified { a } => {
                lines.push("well = modified".into());
                lines.push(format!("well_a = {a:e}"));
            }
        }
        lines.push(format!("omega = {:e}", p.omega));
        lines.push(format!("gravity = {:e} {:e}", p.gravity[0], p.gravity[1]));
        lines.push(format!("newton_tol = {:e}", self.newton.tol));
        lines.push(format!("newton_max_iter = {}", self.newton.max_iter));
        lines.push(format!("newton_max_halvings = {}", self.newton.max_halvings));
        lines.push(format!("pin_lambda = {}", self.newton.pin_lambda));
        lines.push(format!("snapshot_every = {}", self.snapshot_every));
        let mut s = lines.join("\n");
        s.push('\n');
        s
    }
}

/// Every key the parser accepts.
pub const KEYS: [&str; 28] = [
    "case",
    "initial",
    "mesh",
    "degree",
    "k",
    "t_final",
    "seed",
    "amplitude",
    "rho1",
    "rho2",
    "gamma",
    "viscosity",
    "eta",
    "eta1",
    "eta2",
    "m_j",
    "m_r",
    "sigma",
    "well",
    "well_a",
    "omega",
    "gravity",
    "newton_tol",
    "newton_max_iter",
    "newton_max_halvings",
    "pin_lambda",
    "snapshot_every",
    "out",
];

fn err(line: usize, message: impl Into<String>) -> Error {
    Error::Config { line, message: message.into() }
}

fn number<T: FromStr>(line: usize, key: &str, value: &str) -> Result<T> {
    value.parse().map_err(|_| err(line, format!("`{key}` expects a number, got `{value}`")))
}

/// Parses the configuration text. `out` is accepted and returned separately.
pub fn parse_config_with_out(text: &str) -> Result<(RunConfig, Option<String>)> {
    let mut entries: Vec<(usize, &str, &str)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| err(line, format!("expected `key = value`, got `{content}`")))?;
        let (key, value) = (key.trim(), value.trim());
        if !KEYS.contains(&key) {
            return Err(err(line, format!("unknown key `{key}`")));
        }
        if let Some((first, ..)) = entries.iter().find(|(_, k, _)| *k == key) {
            return Err(err(line, format!("`{key}` already set on line {first}")));
        }
        entries.push((line, key, value));
    }
    let (case_line, _, case_value) = entries
        .iter()
        .find(|(_, k, _)| *k == "case")
        .copied()
        .ok_or_else(|| err(0, "missing `case`"))?;
    let case: TestCase = case_value.parse().map_err(|_| err(case_line, format!("unknown case `{case_value}`")))?;
    let mut c = RunConfig::defaults(case);
    let mut out = None;
    let (mut viscosity, mut eta, mut eta1, mut eta2) = (None, None, None, None);
    let (mut well, mut well_a) = (None, None);
    let (mut seed, mut amplitude) = (None, None);
    for &(line, key, value) in &entries {
        match key {
            "case" => {}
            "initial" => c.initial = value.parse().map_err(|_| err(line, format!("unknown initial data `{value}`")))?,
            "mesh" => c.mesh = value.parse().map_err(|e: String| err(line, e))?,
            "degree" => c.degree = number(line, key, value)?,
            "k" => {
                c.timestep = match value {
                    "h^2" => TimeStep::MeshSquared,
                    _ => TimeStep::Fixed(number(line, key, value)?),
                }
            }
            "t_final" => c.t_final = number(line, key, value)?,
            "seed" => seed = Some((line, number::<u64>(line, key, value)?)),
            "amplitude" => amplitude = Some((line, number::<f64>(line, key, value)?)),
            "rho1" => c.params.rho1 = number(line, key, value)?,
            "rho2" => c.params.rho2 = number(line, key, value)?,
            "gamma" => c.params.gamma = number(line, key, value)?,
            "viscosity" => match value {
                "simplified" | "tensor" => viscosity = Some((line, value)),
                _ => return Err(err(line, format!("viscosity is `simplified` or `tensor`, got `{value}`"))),
            },
            "eta" => eta = Some(number::<f64>(line, key, value)?),
            "eta1" => eta1 = Some(number::<f64>(line, key, value)?),
            "eta2" => eta2 = Some(number::<f64>(line, key, value)?),
            "m_j" => c.params.m_j = number(line, key, value)?,
            "m_r" => c.params.m_r = number(line, key, value)?,
            "sigma" => c.params.sigma = if value == "auto" { None } else { Some(number(line, key, value)?) },
            "well" => match value {
                "quartic" | "modified" => well = Some((line, value)),
                _ => return Err(err(line, format!("well is `quartic` or `modified`, got `{value}`"))),
            },
            "well_a" => well_a = Some((line, number::<f64>(line, key, value)?)),
            "omega" => c.params.omega = number(line, key, value)?,
            "gravity" => {
                let parts: Vec<&str> = value.split_whitespace().collect();
                if parts.len() != 2 {
                    return Err(err(line, format!("gravity expects two numbers, got `{value}`")));
                }
                c.params.gravity = [number(line, key, parts[0])?, number(line, key, parts[1])?];
            }
            "newton_tol" => c.newton.tol = number(line, key, value)?,
            "newton_max_iter" => c.newton.max_iter = number(line, key, value)?,
            "newton_max_halvings" => c.newton.max_halvings = number(line, key, value)?,
            "pin_lambda" => {
                c.newton.pin_lambda = match value {
                    "true" => true,
                    "false" => false,
                    _ => return Err(err(line, format!("pin_lambda is `true` or `false`, got `{value}`"))),
                }
            }
            "snapshot_every" => c.snapshot_every = number(line, key, value)?,
            "out" => out = Some(value.to_string()),
            _ => unreachable!("keys are checked above"),
        }
    }
    let kind = viscosity.map(|(_, v)| v).unwrap_or(match c.params.viscosity {
        Viscosity::Simplified { .. } => "simplified",
        Viscosity::Tensor { .. } => "tensor",
    });
    c.params.viscosity = match (kind, c.params.viscosity) {
        ("simplified", Viscosity::Simplified { eta: e }) => Viscosity::Simplified { eta: eta.unwrap_or(e) },
        ("simplified", _) => Viscosity::Simplified { eta: eta.unwrap_or(1e-3) },
        (_, Viscosity::Tensor { eta1: a, eta2: b }) => Viscosity::Tensor {
            eta1: eta1.unwrap_or(a),
            eta2: eta2.unwrap_or(b),
        },
        _ => Viscosity::Tensor {
            eta1: eta1.unwrap_or(1e-3),
            eta2: eta2.unwrap_or(1e-3),
        },
    };
    let check_unused = |set: bool, key: &str, needs: &str| -> Result<()> {
        if set {
            let line = entries.iter().find(|(_, k, _)| *k == key).map_or(0, |e| e.0);
            return Err(err(line, format!("`{key}` needs {needs}")));
        }
        Ok(())
    };
    match c.params.viscosity {
        Viscosity::Simplified { .. } => check_unused(eta1.is_some() || eta2.is_some(), if eta1.is_some() { "eta1" } else { "eta2" }, "viscosity = tensor")?,
        Viscosity::Tensor { .. } => check_unused(eta.is_some(), "eta", "viscosity = simplified")?,
    }
    let modified = match well.map(|(_, w)| w) {
        Some(w) => w == "modified",
        None => matches!(c.params.well, Well::Modified { .. }),
    };
    c.params.well = match (modified, c.params.well) {
        (false, _) => {
            check_unused(well_a.is_some(), "well_a", "well = modified")?;
            Well::Quartic
        }
        (true, Well::Modified { a }) => Well::Modified { a: well_a.map_or(a, |w| w.1) },
        (true, Well::Quartic) => match well_a {
            Some((_, a)) => Well::Modified { a },
            None => c.params.default_modified_well(),
        },
    };
    if let Case::Random { seed: s, amplitude: a } = &mut c.initial {
        if let Some((_, v)) = seed {
            *s = v;
        }
        if let Some((_, v)) = amplitude {
            *a = v;
        }
    } else if let Some((line, _)) = seed.or(amplitude.map(|(l, _)| (l, 0))) {
        return Err(err(line, "`seed` and `amplitude` apply only to random initial data"));
    }
    if let Case::Random { amplitude, .. } = c.initial {
        if !(amplitude > 0.0) {
            let line = amplitude_line(&entries);
            return Err(err(line, format!("amplitude must be positive, got {amplitude}")));
        }
    }
    c.validate().map_err(|e| match e {
        Error::Domain(m) => {
            let subject = m.split_whitespace().next().unwrap_or("").trim_matches('`');
            let line = entries.iter().find(|(_, k, _)| *k == subject).map_or(0, |e| e.0);
            err(line, m)
        }
        other => other,
    })?;
    Ok((c, out))
}

fn amplitude_line(entries: &[(usize, &str, &str)]) -> usize {
    entries.iter().find(|(_, k, _)| *k == "amplitude" || *k == "initial").map_or(0, |e| e.0)
}

/// Parses the configuration text, ignoring any `out` key.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    parse_config_with_out(text).map(|(c, _)| c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_of_test2() {
        let c = parse_config("case = test2\n").unwrap();
        assert_eq!(c.params.rho1, 1.0);
        assert_eq!(c.params.rho2, 2.0);
        assert_eq!(c.params.gamma, 1e-3);
        assert_eq!(c.params.m_j, 1e-2);
        assert_eq!(c.params.m_r, 1e-2);
        assert_eq!(c.degree, 1);
        assert_eq!(c.timestep, TimeStep::Fixed(0.01));
    }

    #[test]
    fn rejects_bad_values_with_lines() {
        match parse_config("case = test1\n\nrho1 = -1\n") {
            Err(Error::Config { message, .. }) => assert!(message.contains("rho1")),
            other => panic!("{other:?}"),
        }
        match parse_config("case = test1\n# c\nrho3 = 1\n") {
            Err(Error::Config { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        match parse_config("case = test1\ngamma = x\n") {
            Err(Error::Config { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        assert!(parse_config("rho1 = 1\n").is_err());
        assert!(parse_config("case = test9\n").is_err());
        assert!(parse_config("case = test1\nseed = 3\n").is_err());
        assert!(parse_config("case = test1\nomega = 1\n").is_err());
        assert!(parse_config("case = test1\ngamma = 1\ngamma = 2\n").is_err());
    }

    #[test]
    fn round_trip_every_case() {
        for case in TestCase::ALL {
            let c = RunConfig::defaults(case);
            assert_eq!(parse_config(&c.to_text()).unwrap(), c, "{case}");
        }
        let text = "case = test6\nrho2 = 100\nwell_a = 1e4\nseed = 7\namplitude = 0.02\nk = h^2\nviscosity = tensor\neta1 = 0.5\n";
        let c = parse_config(text).unwrap();
        assert_eq!(c.initial, Case::Random { seed: 7, amplitude: 0.02 });
        assert_eq!(c.params.viscosity, Viscosity::Tensor { eta1: 0.5, eta2: 1e-3 });
        assert_eq!(parse_config(&c.to_text()).unwrap(), c);
    }
}

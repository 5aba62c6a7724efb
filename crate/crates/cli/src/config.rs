//! Line-oriented run configuration.
//!
//! ```text
//! # comment
//! [model]
//! worldline = boost(0.6)
//! mollifier = bump
//! ```
//!
//! Every `key = value` line belongs to the most recent `[section]`. Blank
//! lines and text after `#` are ignored. `point` may repeat; any other key
//! given twice is an error. See the README for the full key list.

use std::collections::HashSet;
use std::path::PathBuf;

use lwreg_core::fields::PsiForm;
use lwreg_core::minkowski::{CatalogWorldline, FourVector};
use lwreg_core::regularization::{geometric_grid, validate_grid, HeavisideFamily};
use lwreg_core::retarded::DEFAULT_TOL;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{}{msg}", line.map(|l| format!("line {l}: ")).unwrap_or_default())]
pub struct ConfigError {
    pub line: Option<usize>,
    pub msg: String,
}

impl ConfigError {
    fn at(line: usize, msg: impl Into<String>) -> Self {
        ConfigError {
            line: Some(line),
            msg: msg.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MollifierChoice {
    Bump,
    Boxcar,
}

impl MollifierChoice {
    pub fn family(self) -> HeavisideFamily {
        match self {
            MollifierChoice::Bump => HeavisideFamily::bump(),
            MollifierChoice::Boxcar => HeavisideFamily::boxcar(),
        }
    }
}

/// Observers along null rays from the worldline, as in `sampling::null_ray_cloud`.
#[derive(Debug, Clone, PartialEq)]
pub struct NullRaySpec {
    pub count: usize,
    pub tau: (f64, f64),
    pub xi: (f64, f64),
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BallSpec {
    pub center: Vec<f64>,
    pub radius: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub worldline: CatalogWorldline,
    pub mollifier: MollifierChoice,
    pub psi_form: PsiForm,
    pub charge: f64,
    pub magnetic_moment: f64,
    pub eps_grid: Vec<f64>,
    pub points: Vec<FourVector>,
    pub null_ray: Option<NullRaySpec>,
    pub retarded_tol: f64,
    pub rel_tol: f64,
    pub space_test: Option<BallSpec>,
    pub spacetime_test: Option<BallSpec>,
    pub max_order: u32,
    pub output: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            worldline: CatalogWorldline::Rest,
            mollifier: MollifierChoice::Bump,
            psi_form: PsiForm::Corrected,
            charge: 1.0,
            magnetic_moment: 1.0,
            eps_grid: geometric_grid(0.1, 0.5, 6).expect("default grid is valid"),
            points: Vec::new(),
            null_ray: None,
            retarded_tol: DEFAULT_TOL,
            rel_tol: 1e-3,
            space_test: None,
            spacetime_test: None,
            max_order: lwreg_core::distalg::DEFAULT_MAX_ORDER,
            output: None,
        }
    }
}

impl RunConfig {
    /// Explicit points first, then the null-ray cloud; with neither, eight
    /// observers at ξ̃ ∈ [0.05, 0.5].
    pub fn observers(&self) -> Vec<FourVector> {
        let mut out = self.points.clone();
        let default = NullRaySpec {
            count: 8,
            tau: (-1.0, 1.0),
            xi: (0.05, 0.5),
            seed: 1,
        };
        let spec = match (&self.null_ray, out.is_empty()) {
            (Some(s), _) => Some(s),
            (None, true) => Some(&default),
            (None, false) => None,
        };
        if let Some(s) = spec {
            out.extend(
                lwreg_core::sampling::null_ray_cloud(&self.worldline, s.count, s.tau, s.xi, s.seed)
                    .into_iter()
                    .map(|o| o.x),
            );
        }
        out
    }

    pub fn parse(src: &str) -> Result<RunConfig, ConfigError> {
        let mut cfg = RunConfig::default();
        let mut section: Option<String> = None;
        let mut seen = HashSet::new();
        for (idx, raw) in src.lines().enumerate() {
            let n = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix('[') {
                let name = name
                    .strip_suffix(']')
                    .ok_or_else(|| ConfigError::at(n, "unterminated section header"))?
                    .trim();
                if !SECTIONS.contains(&name) {
                    return Err(ConfigError::at(n, format!("unknown section [{name}]")));
                }
                section = Some(name.to_string());
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| ConfigError::at(n, "expected `key = value`"))?;
            let (key, value) = (key.trim(), value.trim());
            let sec = section
                .as_deref()
                .ok_or_else(|| ConfigError::at(n, "key outside of any section"))?;
            if key != "point" && !seen.insert(format!("{sec}.{key}")) {
                return Err(ConfigError::at(n, format!("duplicate key {sec}.{key}")));
            }
            cfg.set(sec, key, value).map_err(|msg| ConfigError::at(n, msg))?;
        }
        Ok(cfg)
    }

    fn set(&mut self, section: &str, key: &str, v: &str) -> Result<(), String> {
        match (section, key) {
            ("model", "worldline") => self.worldline = v.parse().map_err(|e| format!("{e}"))?,
            ("model", "mollifier") => {
                self.mollifier = match v {
                    "bump" => MollifierChoice::Bump,
                    "boxcar" => MollifierChoice::Boxcar,
                    _ => return Err(format!("mollifier must be bump or boxcar, got `{v}`")),
                }
            }
            ("model", "psi") => {
                self.psi_form = match v {
                    "corrected" => PsiForm::Corrected,
                    "as_printed" => PsiForm::AsPrinted,
                    _ => return Err(format!("psi must be corrected or as_printed, got `{v}`")),
                }
            }
            ("model", "charge") => self.charge = finite(key, v)?,
            ("model", "magnetic_moment") => self.magnetic_moment = finite(key, v)?,
            ("grid", "epsilon_grid") => self.eps_grid = parse_grid(v)?,
            ("observers", "point") => {
                let c = numbers(v)?;
                let [t, x, y, z] = c[..] else {
                    return Err(format!("point needs 4 coordinates, got {}", c.len()));
                };
                self.points.push(FourVector::new(t, x, y, z));
            }
            ("observers", "null_ray") => {
                let c = numbers(v)?;
                let [count, t0, t1, x0, x1, seed] = c[..] else {
                    return Err("null_ray = count, tau_lo, tau_hi, xi_lo, xi_hi, seed".into());
                };
                if count < 1.0 || count.fract() != 0.0 || seed < 0.0 || seed.fract() != 0.0 {
                    return Err("null_ray count and seed must be nonnegative integers, count at least 1".into());
                }
                if !(t0 <= t1 && 0.0 < x0 && x0 <= x1) {
                    return Err("null_ray needs tau_lo <= tau_hi and 0 < xi_lo <= xi_hi".into());
                }
                self.null_ray = Some(NullRaySpec {
                    count: count as usize,
                    tau: (t0, t1),
                    xi: (x0, x1),
                    seed: seed as u64,
                });
            }
            ("retarded", "tol") => self.retarded_tol = positive(key, v)?,
            ("association", "rel_tol") => self.rel_tol = positive(key, v)?,
            ("association", "space_test") => self.space_test = Some(ball(v, 3)?),
            ("association", "spacetime_test") => self.spacetime_test = Some(ball(v, 4)?),
            ("distalg", "max_order") => {
                self.max_order = v
                    .parse()
                    .map_err(|_| format!("max_order must be a nonnegative integer, got `{v}`"))?
            }
            ("output", "path") => self.output = Some(PathBuf::from(v)),
            _ => return Err(format!("unknown key {section}.{key}")),
        }
        Ok(())
    }
}

const SECTIONS: [&str; 7] = [
    "model",
    "grid",
    "observers",
    "retarded",
    "association",
    "distalg",
    "output",
];

fn numbers(v: &str) -> Result<Vec<f64>, String> {
    v.split(',')
        .map(|s| {
            let s = s.trim();
            s.parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| format!("`{s}` is not a finite number"))
        })
        .collect()
}

fn finite(key: &str, v: &str) -> Result<f64, String> {
    match numbers(v)?[..] {
        [x] => Ok(x),
        _ => Err(format!("{key} takes one number")),
    }
}

fn positive(key: &str, v: &str) -> Result<f64, String> {
    let x = finite(key, v)?;
    if x > 0.0 {
        Ok(x)
    } else {
        Err(format!("{key} must be positive"))
    }
}

fn call<'a>(v: &'a str, name: &str) -> Option<&'a str> {
    v.strip_prefix(name)?.trim_start().strip_prefix('(')?.strip_suffix(')')
}

/// `geometric(start, ratio, count)` or `list(e1, e2, ...)`.
fn parse_grid(v: &str) -> Result<Vec<f64>, String> {
    let grid = if let Some(args) = call(v, "geometric") {
        let a = numbers(args)?;
        let [start, ratio, count] = a[..] else {
            return Err("geometric takes (start, ratio, count)".into());
        };
        if count < 1.0 || count.fract() != 0.0 {
            return Err("geometric count must be a positive integer".into());
        }
        if !(start > 0.0 && start <= 1.0) {
            return Err("epsilon_grid out of (0,1]".into());
        }
        geometric_grid(start, ratio, count as usize).map_err(|e| e.to_string())?
    } else if let Some(args) = call(v, "list") {
        let g = numbers(args)?;
        validate_grid(&g).map_err(|e| e.to_string())?;
        g
    } else {
        return Err(format!(
            "epsilon_grid must be geometric(start, ratio, count) or list(...), got `{v}`"
        ));
    };
    Ok(grid)
}

/// `c1, ..., cd; radius`.
fn ball(v: &str, dim: usize) -> Result<BallSpec, String> {
    let (c, r) = v
        .split_once(';')
        .ok_or("test function is `center coordinates; radius`")?;
    let center = numbers(c)?;
    if center.len() != dim {
        return Err(format!("test function center needs {dim} coordinates"));
    }
    let radius = positive("radius", r)?;
    Ok(BallSpec { center, radius })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_input_gives_defaults() {
        assert_eq!(RunConfig::parse("# nothing\n\n").unwrap(), RunConfig::default());
    }

    #[test]
    fn reads_every_section() {
        let src = "
[model]
worldline = circular(1, 0.5)   # helix
mollifier = boxcar
psi = as_printed
charge = 2
magnetic_moment = 0.5
[grid]
epsilon_grid = list(0.1, 0.05, 0.025)
[observers]
point = 0, 1, 0, 0
point = 1, 0, 2, 0
null_ray = 5, -1, 1, 0.1, 0.2, 7
[retarded]
tol = 1e-11
[association]
rel_tol = 1e-2
space_test = 0, 0, 0; 0.5
spacetime_test = 0, 0.1, 0, 0; 0.7
[distalg]
max_order = 4
[output]
path = out.csv
";
        let c = RunConfig::parse(src).unwrap();
        assert_eq!(c.worldline, CatalogWorldline::circular(1.0, 0.5).unwrap());
        assert_eq!(c.mollifier, MollifierChoice::Boxcar);
        assert_eq!(c.psi_form, PsiForm::AsPrinted);
        assert_eq!((c.charge, c.magnetic_moment), (2.0, 0.5));
        assert_eq!(c.eps_grid, vec![0.1, 0.05, 0.025]);
        assert_eq!(c.points.len(), 2);
        assert_eq!(c.observers().len(), 7);
        assert_eq!(c.retarded_tol, 1e-11);
        assert_eq!(c.space_test.unwrap().radius, 0.5);
        assert_eq!(c.max_order, 4);
        assert_eq!(c.output, Some(PathBuf::from("out.csv")));
    }

    #[test]
    fn geometric_grid_matches_list() {
        let c = RunConfig::parse("[grid]\nepsilon_grid = geometric(0.1, 0.5, 3)").unwrap();
        assert_eq!(c.eps_grid, vec![0.1, 0.05, 0.025]);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let cases = [
            ("[grid]\nepsilon_grid = list(1.5, 0.1)", 2, "epsilon_grid out of (0,1]"),
            (
                "[grid]\nepsilon_grid = geometric(1.5, 0.5, 3)",
                2,
                "epsilon_grid out of (0,1]",
            ),
            ("worldline = rest", 1, "outside of any section"),
            ("[model]\n\nworldline = spiral(1)", 3, "cannot parse worldline"),
            ("[model]\nmollifier = bump\nmollifier = bump", 3, "duplicate"),
            ("[nope]", 1, "unknown section"),
            ("[model]\ncolour = red", 2, "unknown key"),
            ("[observers]\npoint = 1, 2", 2, "4 coordinates"),
        ];
        for (src, line, needle) in cases {
            let e = RunConfig::parse(src).unwrap_err();
            assert_eq!(e.line, Some(line), "{src}");
            assert!(e.msg.contains(needle), "{src}: {}", e.msg);
        }
    }
}

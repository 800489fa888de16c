//! Test functions. Every multivalued builtin uses principal branches
//! (`sqrt` and `powf` cut along the negative real axis of their argument);
//! the resulting cut in the `z`-plane is listed with each entry.

use std::collections::{BTreeMap, HashMap};
use std::path::PathBuf;

use briep_core::{Complex64, Point};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum FunctionSpec {
    Builtin {
        builtin: String,
        #[serde(default)]
        params: BTreeMap<String, f64>,
    },
    /// CSV with header `re,im,f_re,f_im`; every node and sample point must
    /// be listed.
    Table { table: PathBuf },
}

impl FunctionSpec {
    pub fn validate(&self) -> Result<(), CliError> {
        if let FunctionSpec::Builtin { builtin, params } = self {
            let all = registry();
            let entry = all
                .iter()
                .find(|b| b.name == *builtin)
                .ok_or_else(|| CliError::Config(format!("unknown builtin '{builtin}'")))?;
            for key in params.keys() {
                if !entry.params.iter().any(|(k, _)| k == key) {
                    return Err(CliError::Config(format!(
                        "builtin '{builtin}' has no parameter '{key}'"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn instantiate(&self) -> Result<TestFunction, CliError> {
        match self {
            FunctionSpec::Builtin { builtin, params } => {
                self.validate()?;
                let entry = registry().into_iter().find(|b| b.name == *builtin).unwrap();
                let values: Vec<f64> = entry
                    .params
                    .iter()
                    .map(|(k, d)| params.get(*k).copied().unwrap_or(*d))
                    .collect();
                Ok(TestFunction {
                    name: builtin.clone(),
                    eval: Evaluator::Closure((entry.make)(&values)),
                })
            }
            FunctionSpec::Table { table } => Ok(TestFunction {
                name: table.display().to_string(),
                eval: Evaluator::Table(SampleTable::load(table)?),
            }),
        }
    }
}

type Closure = Box<dyn Fn(Complex64) -> Complex64 + Send + Sync>;

enum Evaluator {
    Closure(Closure),
    Table(SampleTable),
}

pub struct TestFunction {
    pub name: String,
    eval: Evaluator,
}

impl std::fmt::Debug for TestFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TestFunction").field("name", &self.name).finish()
    }
}

impl TestFunction {
    pub fn from_fn(name: &str, f: impl Fn(Complex64) -> Complex64 + Send + Sync + 'static) -> Self {
        Self {
            name: name.to_string(),
            eval: Evaluator::Closure(Box::new(f)),
        }
    }

    /// Value at `z`; non-finite results and table misses are errors.
    pub fn eval(&self, z: Point) -> Result<Complex64, CliError> {
        let v = match &self.eval {
            Evaluator::Closure(f) => f(z),
            Evaluator::Table(t) => t.lookup(z).ok_or(CliError::FunctionEval { at: z })?,
        };
        if v.re.is_finite() && v.im.is_finite() {
            Ok(v)
        } else {
            Err(CliError::FunctionEval { at: z })
        }
    }
}

struct SampleTable {
    exact: HashMap<(u64, u64), Complex64>,
    rows: Vec<(Point, Complex64)>,
}

impl SampleTable {
    fn load(path: &PathBuf) -> Result<Self, CliError> {
        let mut reader =
            csv::Reader::from_path(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let mut rows = Vec::new();
        for rec in reader.records() {
            let rec = rec.map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            let v: Vec<f64> = rec
                .iter()
                .map(|s| s.trim().parse::<f64>())
                .collect::<Result<_, _>>()
                .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            if v.len() != 4 {
                return Err(CliError::Config(format!(
                    "{}: rows need re,im,f_re,f_im",
                    path.display()
                )));
            }
            rows.push((Point::new(v[0], v[1]), Complex64::new(v[2], v[3])));
        }
        let exact = rows
            .iter()
            .map(|(z, f)| ((z.re.to_bits(), z.im.to_bits()), *f))
            .collect();
        Ok(Self { exact, rows })
    }

    fn lookup(&self, z: Point) -> Option<Complex64> {
        if let Some(v) = self.exact.get(&(z.re.to_bits(), z.im.to_bits())) {
            return Some(*v);
        }
        let tol = 1e-12 * z.norm().max(1.0);
        self.rows.iter().find(|(p, _)| (p - z).norm() <= tol).map(|(_, f)| *f)
    }
}

pub struct Builtin {
    pub name: &'static str,
    pub formula: &'static str,
    pub cut: &'static str,
    pub params: &'static [(&'static str, f64)],
    make: fn(&[f64]) -> Closure,
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn registry() -> Vec<Builtin> {
    vec![
        Builtin {
            name: "exp_z2",
            formula: "exp(z^2)",
            cut: "none (entire)",
            params: &[],
            make: |_| Box::new(|z| (z * z).exp()),
        },
        Builtin {
            name: "inv_2_plus_z2",
            formula: "1/(2+z^2)",
            cut: "none; poles at ±i√2",
            params: &[],
            make: |_| Box::new(|z| (z * z + 2.0).inv()),
        },
        Builtin {
            name: "inv_3_plus_2z2",
            formula: "1/(3+2z^2)",
            cut: "none; poles at ±i√1.5",
            params: &[],
            make: |_| Box::new(|z| (z * z * 2.0 + 3.0).inv()),
        },
        Builtin {
            name: "inv_1_minus_z2",
            formula: "1/(1-z^2)",
            cut: "none; poles at ±1",
            params: &[],
            make: |_| Box::new(|z| (c(1.0, 0.0) - z * z).inv()),
        },
        Builtin {
            name: "inv_z2",
            formula: "1/z^2",
            cut: "none; double pole at 0",
            params: &[],
            make: |_| Box::new(|z| (z * z).inv()),
        },
        Builtin {
            name: "sqrt_ratio",
            formula: "sqrt((z^2-p)/(z^2-q))",
            cut: "real z with q < z^2 < p",
            params: &[("p", 0.25), ("q", 0.01)],
            make: |v| {
                let (p, q) = (v[0], v[1]);
                Box::new(move |z| ((z * z - p) / (z * z - q)).sqrt())
            },
        },
        Builtin {
            name: "exp_runge",
            formula: "exp(1/(1+a z^2))",
            cut: "none; essential singularities at ±i/√a",
            params: &[("a", 1e4)],
            make: |v| {
                let a = v[0];
                Box::new(move |z| (z * z * a + 1.0).inv().exp())
            },
        },
        Builtin {
            name: "exp_inv_sqrt",
            formula: "exp((1+a z^2)^(-1/2))",
            cut: "imaginary axis beyond ±i/√a",
            params: &[("a", 100.0)],
            make: |v| {
                let a = v[0];
                Box::new(move |z| (z * z * a + 1.0).powf(-0.5).exp())
            },
        },
        Builtin {
            name: "inv_sqrt",
            formula: "1/sqrt(z)",
            cut: "(-inf, 0]",
            params: &[],
            make: |_| Box::new(|z| z.sqrt().inv()),
        },
        Builtin {
            name: "sqrt_mixed",
            formula: "sqrt(z+0.5)/((z^2+0.25)(z-0.5))",
            cut: "(-inf, -0.5]; poles at ±0.5i and 0.5",
            params: &[],
            make: |_| Box::new(|z| (z + 0.5).sqrt() / ((z * z + 0.25) * (z - 0.5))),
        },
        Builtin {
            name: "exp_shifted",
            formula: "exp(1/(b^2+(s z)^2))",
            cut: "none; essential singularities at ±i b/s",
            params: &[("b", 5.1), ("s", 10.0)],
            make: |v| {
                let (b, s) = (v[0], v[1]);
                Box::new(move |z| ((z * s) * (z * s) + b * b).inv().exp())
            },
        },
        Builtin {
            name: "exp_two_point",
            formula: "exp(1/(k (z-z1)(z-z2)))",
            cut: "none; essential singularities at z1 and z2",
            params: &[
                ("k", 100.0),
                ("z1_re", 0.09),
                ("z1_im", 0.0),
                ("z2_re", 0.0),
                ("z2_im", 0.51),
            ],
            make: |v| {
                let (k, z1, z2) = (v[0], c(v[1], v[2]), c(v[3], v[4]));
                Box::new(move |z| ((z - z1) * (z - z2) * k).inv().exp())
            },
        },
        Builtin {
            name: "sqrt_shift",
            formula: "sqrt(z+c)",
            cut: "(-inf, -c]",
            params: &[("c", 0.2)],
            make: |v| {
                let s = v[0];
                Box::new(move |z| (z + s).sqrt())
            },
        },
        Builtin {
            name: "inv_z2_plus",
            formula: "1/(z^2+c)",
            cut: "none; poles at ±i√c",
            params: &[("c", 0.04)],
            make: |v| {
                let s = v[0];
                Box::new(move |z| (z * z + s).inv())
            },
        },
        Builtin {
            name: "inv_shift",
            formula: "1/(z-c)",
            cut: "none; pole at c",
            params: &[("c", 1.0)],
            make: |v| {
                let s = v[0];
                Box::new(move |z| (z - s).inv())
            },
        },
    ]
}

//! JSON instance and result files.
//!
//! Numbers are exact: plain JSON integers or `"num/den"` strings. Floats are
//! rejected so that a round trip through a file never loses precision.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use packclass::{BoxItem, Instance, Packing, PackingClass, Rational};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::CliError;

/// Schema version written into every result file.
pub const FORMAT_VERSION: u32 = 1;

/// An exact rational as it appears in a file.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Num(pub Rational);

impl Num {
    pub fn parse(s: &str) -> Result<Num, String> {
        let s = s.trim();
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let num: i64 = num.parse().map_err(|_| format!("bad numerator in {s:?}"))?;
        let den: i64 = den.parse().map_err(|_| format!("bad denominator in {s:?}"))?;
        if den == 0 {
            return Err(format!("zero denominator in {s:?}"));
        }
        Ok(Num(Rational::new(num, den)))
    }
}

impl fmt::Display for Num {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.is_integer() {
            s.serialize_i64(*self.0.numer())
        } else {
            s.serialize_str(&self.to_string())
        }
    }
}

impl<'de> Deserialize<'de> for Num {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct NumVisitor;

        impl Visitor<'_> for NumVisitor {
            type Value = Num;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an integer or a \"num/den\" string")
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Num, E> {
                Ok(Num(Rational::from(v)))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Num, E> {
                i64::try_from(v).map(|v| Num(Rational::from(v))).map_err(|_| E::custom("integer out of range"))
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Num, E> {
                Err(E::custom(format!("{v} is not exact; write integers or \"num/den\" strings")))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Num, E> {
                Num::parse(v).map_err(E::custom)
            }
        }

        d.deserialize_any(NumVisitor)
    }
}

fn nums(v: &[Rational]) -> Vec<Num> {
    v.iter().copied().map(Num).collect()
}

fn rationals(v: &[Num]) -> Vec<Rational> {
    v.iter().map(|n| n.0).collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoxFile {
    pub id: String,
    pub size: Vec<Num>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<Num>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInstance {
    d: usize,
    container: Vec<Num>,
    boxes: Vec<BoxFile>,
}

/// A problem instance as stored on disk.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "RawInstance")]
pub struct InstanceFile {
    pub d: usize,
    pub container: Vec<Num>,
    pub boxes: Vec<BoxFile>,
}

impl TryFrom<RawInstance> for InstanceFile {
    type Error = String;

    fn try_from(raw: RawInstance) -> Result<Self, String> {
        if raw.d == 0 {
            return Err("d must be at least 1".into());
        }
        if raw.container.len() != raw.d {
            return Err(format!("container has {} entries, expected d = {}", raw.container.len(), raw.d));
        }
        let mut seen = BTreeSet::new();
        for b in &raw.boxes {
            if b.size.len() != raw.d {
                return Err(format!("box {:?} has {} sizes, expected d = {}", b.id, b.size.len(), raw.d));
            }
            if !seen.insert(b.id.as_str()) {
                return Err(format!("duplicate box id {:?}", b.id));
            }
        }
        Ok(InstanceFile { d: raw.d, container: raw.container, boxes: raw.boxes })
    }
}

impl InstanceFile {
    pub fn from_instance(inst: &Instance) -> Self {
        InstanceFile {
            d: inst.dim(),
            container: nums(inst.container()),
            boxes: inst
                .boxes()
                .iter()
                .map(|b| BoxFile { id: b.id.clone(), size: nums(&b.size), value: Some(Num(b.value)) })
                .collect(),
        }
    }

    pub fn box_items(&self) -> Vec<BoxItem> {
        self.boxes
            .iter()
            .map(|b| {
                let item = BoxItem::new(b.id.clone(), rationals(&b.size));
                match b.value {
                    Some(v) => item.with_value(v.0),
                    None => item,
                }
            })
            .collect()
    }

    pub fn container(&self) -> Vec<Rational> {
        rationals(&self.container)
    }

    /// Builds the solver instance; with `drop_oversized`, boxes that cannot
    /// fit are removed and their ids returned.
    pub fn instance(&self, drop_oversized: bool) -> Result<(Instance, Vec<String>), CliError> {
        let bad = |e: packclass::Error| {
            let hint = match e {
                packclass::Error::OversizedBox(..) => " (use --drop-oversized to skip such boxes)",
                _ => "",
            };
            CliError::Usage(format!("invalid instance: {e}{hint}"))
        };
        if drop_oversized {
            Instance::new_dropping_oversized(self.container(), self.box_items()).map_err(bad)
        } else {
            Instance::new(self.container(), self.box_items()).map(|i| (i, vec![])).map_err(bad)
        }
    }
}

pub fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn parse_json<T: for<'de> Deserialize<'de>>(path: &Path, text: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Usage(format!("{}:{}:{}: {e}", path.display(), e.line(), e.column())))
}

pub fn load_instance(path: &Path) -> Result<InstanceFile, CliError> {
    parse_json(path, &read_text(path)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictName {
    Feasible,
    Infeasible,
    Optimal,
    ResourceLimit,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct StatsFile {
    pub nodes: u64,
    pub prunes: BTreeMap<String, u64>,
    pub wall_time_s: f64,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub extra: BTreeMap<String, serde_json::Value>,
}

/// Machine-readable outcome of any solver or oracle command.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResultFile {
    pub format: u32,
    pub problem: String,
    pub verdict: VerdictName,
    #[serde(default)]
    pub positions: BTreeMap<String, Vec<Num>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class: Option<Vec<Vec<(String, String)>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<Num>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub height: Option<Num>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub dropped: Vec<String>,
    #[serde(default)]
    pub stats: StatsFile,
}

impl ResultFile {
    pub fn new(problem: &str, verdict: VerdictName) -> Self {
        ResultFile {
            format: FORMAT_VERSION,
            problem: problem.into(),
            verdict,
            positions: BTreeMap::new(),
            class: None,
            value: None,
            height: None,
            dropped: vec![],
            stats: StatsFile::default(),
        }
    }

    pub fn with_packing(mut self, p: &Packing) -> Self {
        self.positions = p.positions.iter().map(|(id, x)| (id.clone(), nums(x))).collect();
        self
    }

    pub fn with_class(mut self, c: &PackingClass) -> Self {
        self.class = Some(c.edge_lists());
        self
    }

    pub fn packing(&self) -> Packing {
        let mut p = Packing::new();
        for (id, x) in &self.positions {
            p.place(id.clone(), rationals(x));
        }
        p
    }
}

/// Positions and/or class, as accepted by `verify` and `render`.
#[derive(Debug, Deserialize)]
pub struct Evidence {
    #[serde(default)]
    pub format: Option<u32>,
    #[serde(default)]
    pub verdict: Option<VerdictName>,
    #[serde(default)]
    pub positions: Option<BTreeMap<String, Vec<Num>>>,
    #[serde(default)]
    pub class: Option<Vec<Vec<(String, String)>>>,
    /// Strip height of a strip-packing result; replaces the last container side.
    #[serde(default)]
    pub height: Option<Num>,
}

impl Evidence {
    pub fn packing(&self) -> Option<Packing> {
        let positions = self.positions.as_ref()?;
        let mut p = Packing::new();
        for (id, x) in positions {
            p.place(id.clone(), rationals(x));
        }
        Some(p)
    }
}

pub fn load_evidence(path: &Path) -> Result<Evidence, CliError> {
    let ev: Evidence = parse_json(path, &read_text(path)?)?;
    if let Some(v) = ev.format.filter(|&v| v != FORMAT_VERSION) {
        return Err(CliError::Usage(format!("{}: unsupported format {v}", path.display())));
    }
    Ok(ev)
}

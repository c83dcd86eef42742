//! JSON map files: `{"name"?: ..., "breakpoints": [...], "values": [...]}`
//! with every number written as an exact rational string.

use pacircle::rational::{self, Q};
use pacircle::{MapError, PaMap};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MapFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    breakpoints: Vec<String>,
    values: Vec<String>,
}

#[derive(Debug)]
pub enum MapFileError {
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    Validation(String),
}

impl std::fmt::Display for MapFileError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MapFileError::Parse {
                line,
                column,
                message,
            } => write!(f, "parse error at line {line}, column {column}: {message}"),
            MapFileError::Validation(m) => write!(f, "invalid map: {m}"),
        }
    }
}

impl std::error::Error for MapFileError {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedMap {
    pub name: Option<String>,
    pub map: PaMap,
}

fn parse_list(field: &str, items: &[String]) -> Result<Vec<Q>, MapFileError> {
    items
        .iter()
        .enumerate()
        .map(|(i, s)| {
            rational::parse(s).map_err(|e| MapFileError::Validation(format!("{field}[{i}]: {e}")))
        })
        .collect()
}

fn describe(e: MapError) -> String {
    match e {
        MapError::NotIncreasing { index } => {
            format!("breakpoints[{index}]: not strictly increasing")
        }
        MapError::ZeroSlope { index } => format!("segment {index}: zero slope"),
        other => other.to_string(),
    }
}

pub fn parse_map_file(text: &str) -> Result<NamedMap, MapFileError> {
    let raw: MapFile = serde_json::from_str(text).map_err(|e| MapFileError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let xs = parse_list("breakpoints", &raw.breakpoints)?;
    let vs = parse_list("values", &raw.values)?;
    let map = PaMap::new(xs, vs).map_err(|e| MapFileError::Validation(describe(e)))?;
    Ok(NamedMap {
        name: raw.name,
        map,
    })
}

/// Canonical text: pretty JSON, lowest-terms rationals, merged collinear
/// segments, trailing newline.
pub fn emit_map(name: Option<&str>, map: &PaMap) -> String {
    let file = MapFile {
        name: name.map(str::to_string),
        breakpoints: map.breakpoints().iter().map(rational::format).collect(),
        values: map.values().iter().map(rational::format).collect(),
    };
    let mut s = serde_json::to_string_pretty(&file).expect("map file serializes");
    s.push('\n');
    s
}

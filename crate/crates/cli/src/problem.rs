//! Problem files: `key = value` lines with `#` comments, or a JSON object
//! with the same keys.
//!
//! ```text
//! # d-majorization of x by y
//! n = 3
//! y = 4, -2, 2
//! d = 4 2 1
//! x = (4, 0, 0)
//! d_end = 1, 1, 1
//! sweep = 0 1 10
//! ```

use std::fmt;
use std::path::Path;

use dmajor_core::arith::parse_rational;
use dmajor_core::{RVec, Rational, WeightVec};
use num_traits::Signed;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputError {
    pub source: String,
    pub position: Option<(usize, usize)>,
    pub message: String,
}

impl InputError {
    fn at(source: &str, line: usize, col: usize, message: impl Into<String>) -> Self {
        InputError {
            source: source.to_string(),
            position: Some((line, col)),
            message: message.into(),
        }
    }

    fn plain(source: &str, message: impl Into<String>) -> Self {
        InputError {
            source: source.to_string(),
            position: None,
            message: message.into(),
        }
    }
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.position {
            Some((line, col)) => write!(f, "{}:{line}:{col}: {}", self.source, self.message),
            None => write!(f, "{}: {}", self.source, self.message),
        }
    }
}

impl std::error::Error for InputError {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sweep {
    pub start: Rational,
    pub end: Rational,
    pub steps: usize,
}

impl Sweep {
    /// `steps + 1` evenly spaced values from `start` to `end`.
    pub fn values(&self) -> Vec<Rational> {
        let width = &self.end - &self.start;
        let k = Rational::from_integer((self.steps as i64).into());
        (0..=self.steps)
            .map(|j| &self.start + &width * Rational::from_integer((j as i64).into()) / &k)
            .collect()
    }
}

#[derive(Debug, Clone)]
struct Entry<T> {
    value: T,
    line: usize,
    col: usize,
}

#[derive(Debug, Clone, Default)]
pub struct Problem {
    pub source: String,
    pub n: usize,
    y: Option<Entry<RVec>>,
    d: Option<Entry<RVec>>,
    x: Option<Entry<RVec>>,
    d_end: Option<Entry<RVec>>,
    pub sweep: Option<Sweep>,
}

impl Problem {
    pub fn read(path: &Path) -> Result<Problem, InputError> {
        let source = path.display().to_string();
        let text = std::fs::read_to_string(path).map_err(|e| InputError::plain(&source, e.to_string()))?;
        Self::parse(&source, &text)
    }

    pub fn parse(source: &str, text: &str) -> Result<Problem, InputError> {
        if text.trim_start().starts_with('{') {
            parse_json(source, text)
        } else {
            parse_key_value(source, text)
        }
    }

    fn missing(&self, key: &str) -> InputError {
        InputError::plain(&self.source, format!("missing key `{key}`"))
    }

    pub fn y(&self) -> Result<&RVec, InputError> {
        self.y.as_ref().map(|e| &e.value).ok_or_else(|| self.missing("y"))
    }

    pub fn x(&self) -> Result<&RVec, InputError> {
        self.x.as_ref().map(|e| &e.value).ok_or_else(|| self.missing("x"))
    }

    pub fn d(&self) -> Result<WeightVec, InputError> {
        let e = self.d.as_ref().ok_or_else(|| self.missing("d"))?;
        self.weight(e, "d")
    }

    pub fn d_end(&self) -> Result<WeightVec, InputError> {
        let e = self.d_end.as_ref().ok_or_else(|| self.missing("d_end"))?;
        self.weight(e, "d_end")
    }

    fn weight(&self, e: &Entry<RVec>, key: &str) -> Result<WeightVec, InputError> {
        WeightVec::new(e.value.clone()).map_err(|err| {
            let message = format!("`{key}`: {err}");
            if e.line > 0 {
                InputError::at(&self.source, e.line, e.col, message)
            } else {
                InputError::plain(&self.source, message)
            }
        })
    }
}

/// A token of a value list with its one-based column.
fn tokens(value: &str, offset: usize) -> Vec<(usize, &str)> {
    let is_sep = |c: char| c.is_whitespace() || matches!(c, ',' | '(' | ')' | '[' | ']');
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in value.char_indices() {
        match (is_sep(c), start) {
            (true, Some(s)) => {
                out.push((offset + s, &value[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((offset + s, &value[s..]));
    }
    out
}

fn parse_key_value(source: &str, text: &str) -> Result<Problem, InputError> {
    let mut p = Problem {
        source: source.to_string(),
        ..Problem::default()
    };
    let mut n: Option<Entry<usize>> = None;
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let body = raw.split('#').next().unwrap();
        if body.trim().is_empty() {
            continue;
        }
        let key_col = body.len() - body.trim_start().len() + 1;
        let Some(eq) = body.find(['=', ':']) else {
            return Err(InputError::at(source, line, key_col, "expected `key = value`"));
        };
        let key = body[..eq].trim();
        let toks = tokens(&body[eq + 1..], eq + 2);
        let end_col = body.trim_end().len() + 1;
        if toks.is_empty() {
            return Err(InputError::at(source, line, end_col, format!("no value for `{key}`")));
        }
        let rationals = |toks: &[(usize, &str)]| -> Result<Vec<Rational>, InputError> {
            toks.iter()
                .map(|&(col, t)| parse_rational(t).map_err(|e| InputError::at(source, line, col, e.to_string())))
                .collect()
        };
        let count = |col: usize, t: &str, what: &str| -> Result<usize, InputError> {
            t.parse::<usize>()
                .map_err(|_| InputError::at(source, line, col, format!("{what} must be a nonnegative integer, found `{t}`")))
        };
        let duplicate = || InputError::at(source, line, key_col, format!("duplicate key `{key}`"));
        match key {
            "n" => {
                if toks.len() != 1 {
                    return Err(InputError::at(source, line, toks[1].0, "`n` takes a single integer"));
                }
                if n.is_some() {
                    return Err(duplicate());
                }
                let value = count(toks[0].0, toks[0].1, "`n`")?;
                if value == 0 {
                    return Err(InputError::at(source, line, toks[0].0, "`n` must be at least 1"));
                }
                n = Some(Entry {
                    value,
                    line,
                    col: toks[0].0,
                });
            }
            "y" | "d" | "x" | "d_end" => {
                let slot = match key {
                    "y" => &mut p.y,
                    "d" => &mut p.d,
                    "x" => &mut p.x,
                    _ => &mut p.d_end,
                };
                if slot.is_some() {
                    return Err(duplicate());
                }
                let values = rationals(&toks)?;
                if key.starts_with('d') {
                    if let Some(i) = values.iter().position(|v| !v.is_positive()) {
                        return Err(InputError::at(
                            source,
                            line,
                            toks[i].0,
                            format!("`{key}` entries must be strictly positive, found {}", values[i]),
                        ));
                    }
                }
                *slot = Some(Entry {
                    value: RVec::new(values),
                    line,
                    col: toks[0].0,
                });
            }
            "sweep" => {
                if p.sweep.is_some() {
                    return Err(duplicate());
                }
                if toks.len() != 3 {
                    return Err(InputError::at(source, line, toks[0].0, "`sweep` takes `start end steps`"));
                }
                let ends = rationals(&toks[..2])?;
                let steps = count(toks[2].0, toks[2].1, "sweep steps")?;
                if steps == 0 {
                    return Err(InputError::at(source, line, toks[2].0, "sweep steps must be at least 1"));
                }
                p.sweep = Some(Sweep {
                    start: ends[0].clone(),
                    end: ends[1].clone(),
                    steps,
                });
            }
            _ => return Err(InputError::at(source, line, key_col, format!("unknown key `{key}`"))),
        }
    }
    finish(p, n)
}

fn finish(mut p: Problem, n: Option<Entry<usize>>) -> Result<Problem, InputError> {
    let vectors = [("y", &p.y), ("d", &p.d), ("x", &p.x), ("d_end", &p.d_end)];
    let expected = match &n {
        Some(e) => Some((e.value, "n")),
        None => vectors.iter().find_map(|(k, v)| v.as_ref().map(|e| (e.value.len(), *k))),
    };
    let Some((size, origin)) = expected else {
        return Err(InputError::plain(&p.source, "no vectors given"));
    };
    for (key, v) in vectors {
        if let Some(e) = v {
            if e.value.len() != size {
                let message = format!("`{key}` has {} entries but `{origin}` implies {size}", e.value.len());
                return Err(if e.line > 0 {
                    InputError::at(&p.source, e.line, e.col, message)
                } else {
                    InputError::plain(&p.source, message)
                });
            }
        }
    }
    p.n = size;
    Ok(p)
}

fn parse_json(source: &str, text: &str) -> Result<Problem, InputError> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| InputError::at(source, e.line(), e.column(), e.to_string()))?;
    let obj = value
        .as_object()
        .ok_or_else(|| InputError::plain(source, "top level must be an object"))?;
    let scalar = |key: &str, v: &serde_json::Value| -> Result<Rational, InputError> {
        let literal = match v {
            serde_json::Value::String(s) => s.clone(),
            serde_json::Value::Number(x) => x.to_string(),
            _ => return Err(InputError::plain(source, format!("`{key}` entries must be numbers or strings"))),
        };
        parse_rational(&literal).map_err(|e| InputError::plain(source, format!("`{key}`: {e}")))
    };
    let list = |key: &str, v: &serde_json::Value| -> Result<Vec<Rational>, InputError> {
        v.as_array()
            .ok_or_else(|| InputError::plain(source, format!("`{key}` must be an array")))?
            .iter()
            .map(|e| scalar(key, e))
            .collect()
    };
    let mut p = Problem {
        source: source.to_string(),
        ..Problem::default()
    };
    let mut n = None;
    for (key, v) in obj {
        match key.as_str() {
            "n" => {
                let value = v
                    .as_u64()
                    .filter(|&k| k > 0)
                    .ok_or_else(|| InputError::plain(source, "`n` must be a positive integer"))?;
                n = Some(Entry {
                    value: value as usize,
                    line: 0,
                    col: 0,
                });
            }
            "y" | "d" | "x" | "d_end" => {
                let values = list(key, v)?;
                if key.starts_with('d') && values.iter().any(|v| !v.is_positive()) {
                    return Err(InputError::plain(source, format!("`{key}` entries must be strictly positive")));
                }
                let entry = Some(Entry {
                    value: RVec::new(values),
                    line: 0,
                    col: 0,
                });
                match key.as_str() {
                    "y" => p.y = entry,
                    "d" => p.d = entry,
                    "x" => p.x = entry,
                    _ => p.d_end = entry,
                }
            }
            "sweep" => {
                let parts = v.as_array().filter(|a| a.len() == 3);
                let parts = parts.ok_or_else(|| InputError::plain(source, "`sweep` must be [start, end, steps]"))?;
                let steps = parts[2]
                    .as_u64()
                    .filter(|&k| k > 0)
                    .ok_or_else(|| InputError::plain(source, "sweep steps must be a positive integer"))?;
                p.sweep = Some(Sweep {
                    start: scalar("sweep", &parts[0])?,
                    end: scalar("sweep", &parts[1])?,
                    steps: steps as usize,
                });
            }
            other => return Err(InputError::plain(source, format!("unknown key `{other}`"))),
        }
    }
    finish(p, n)
}

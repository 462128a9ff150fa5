//! Textual function specifications such as `maj:3`, `mod:3:4`,
//! `sym:4:0,3`, `tt:2:8` or `anf:3:x1x2+x2x3+x1x3`.

use std::fmt;
use std::str::FromStr;

use crate::anf::AnfPolynomial;
use crate::boolean::{BooleanFunction, Family, SymmetricProfile};
use crate::error::{Error, Result};

/// A parsed specification, before the truth table is built.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FunctionSpec {
    Family(Family),
    /// Hex truth table, bit `m` of the number is the output at index `m`.
    TruthTable {
        n: usize,
        hex: String,
    },
    Anf(AnfPolynomial),
}

impl FunctionSpec {
    pub fn build(&self) -> Result<BooleanFunction> {
        match self {
            FunctionSpec::Family(f) => f.build(),
            FunctionSpec::TruthTable { n, hex } => BooleanFunction::from_hex(*n, hex),
            FunctionSpec::Anf(p) => Ok(p.to_function()),
        }
    }

    pub fn family(&self) -> Option<&Family> {
        match self {
            FunctionSpec::Family(f) => Some(f),
            _ => None,
        }
    }
}

impl FromStr for FunctionSpec {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        parse_spec(text)
    }
}

impl fmt::Display for FunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunctionSpec::Family(fam) => match fam {
                Family::And(n) => write!(f, "and:{n}"),
                Family::Or(n) => write!(f, "or:{n}"),
                Family::Xor(n) => write!(f, "xor:{n}"),
                Family::Maj(n) => write!(f, "maj:{n}"),
                Family::Cq(n) => write!(f, "cq:{n}"),
                Family::C3(n) => write!(f, "c3:{n}"),
                Family::Mod { k, n } => write!(f, "mod:{k}:{n}"),
                Family::Exact { k, n } => write!(f, "exact:{k}:{n}"),
                Family::Lsb { l, n } => write!(f, "lsb:{l}:{n}"),
                Family::Sym(p) => {
                    let ws: Vec<String> = p.accept.iter().map(usize::to_string).collect();
                    write!(f, "sym:{}:{}", p.n, ws.join(","))
                }
            },
            FunctionSpec::TruthTable { n, hex } => write!(f, "tt:{n}:{hex}"),
            FunctionSpec::Anf(p) => write!(f, "anf:{}:{p}", p.n()),
        }
    }
}

/// Parses and builds in one step.
pub fn parse_function_spec(text: &str) -> Result<BooleanFunction> {
    parse_spec(text)?.build()
}

/// A `:`-separated field and its byte offset in the input.
struct Field<'a> {
    text: &'a str,
    pos: usize,
}

impl Field<'_> {
    fn number(&self, what: &str) -> Result<usize> {
        self.text.trim().parse().map_err(|_| Error::Parse {
            pos: self.pos,
            msg: format!("expected {what}, found `{}`", self.text),
        })
    }
}

fn shift(e: Error, offset: usize) -> Error {
    match e {
        Error::Parse { pos, msg } => Error::Parse {
            pos: pos + offset,
            msg,
        },
        other => other,
    }
}

pub fn parse_spec(text: &str) -> Result<FunctionSpec> {
    let (name, rest) = text.split_once(':').ok_or_else(|| Error::Parse {
        pos: text.len(),
        msg: "expected `name:params`".into(),
    })?;
    let name = name.trim().to_ascii_lowercase();
    let base = name.len() + 1;
    // Everything after the count is one field for these forms.
    let fields: Vec<Field> = if name == "anf" || name == "tt" || name == "sym" {
        match rest.split_once(':') {
            Some((a, b)) => vec![
                Field { text: a, pos: base },
                Field {
                    text: b,
                    pos: base + a.len() + 1,
                },
            ],
            None => vec![Field {
                text: rest,
                pos: base,
            }],
        }
    } else {
        let mut pos = base;
        rest.split(':')
            .map(|t| {
                let f = Field { text: t, pos };
                pos += t.len() + 1;
                f
            })
            .collect()
    };
    let arity = |count: usize| -> Result<()> {
        if fields.len() != count {
            return Err(Error::Parse {
                pos: fields.get(count).map_or(text.len(), |f| f.pos),
                msg: format!("`{name}` takes {count} parameter(s), got {}", fields.len()),
            });
        }
        Ok(())
    };
    let family = match name.as_str() {
        "and" | "or" | "xor" | "maj" | "cq" | "c3" => {
            arity(1)?;
            let n = fields[0].number("a variable count")?;
            match name.as_str() {
                "and" => Family::And(n),
                "or" => Family::Or(n),
                "xor" => Family::Xor(n),
                "maj" => Family::Maj(n),
                "cq" => Family::Cq(n),
                _ => Family::C3(n),
            }
        }
        "mod" | "exact" | "lsb" => {
            arity(2)?;
            let a = fields[0].number("a parameter")?;
            let n = fields[1].number("a variable count")?;
            match name.as_str() {
                "mod" => Family::Mod { k: a, n },
                "exact" => Family::Exact { k: a, n },
                _ => Family::Lsb { l: a, n },
            }
        }
        "sym" => {
            arity(2)?;
            let n = fields[0].number("a variable count")?;
            let list = &fields[1];
            let mut weights = Vec::new();
            let mut pos = list.pos;
            if !list.text.trim().is_empty() {
                for w in list.text.split(',') {
                    weights.push(Field { text: w, pos }.number("a weight")?);
                    pos += w.len() + 1;
                }
            }
            Family::Sym(SymmetricProfile::new(n, weights).map_err(|e| match e {
                Error::Parameter(msg) => Error::Parse { pos: list.pos, msg },
                other => other,
            })?)
        }
        "tt" => {
            arity(2)?;
            let n = fields[0].number("a variable count")?;
            let hex = fields[1].text.trim();
            BooleanFunction::from_hex(n, hex).map_err(|e| shift(e, fields[1].pos))?;
            return Ok(FunctionSpec::TruthTable {
                n,
                hex: hex.to_string(),
            });
        }
        "anf" => {
            arity(2)?;
            let n = fields[0].number("a variable count")?;
            let poly =
                AnfPolynomial::parse(n, fields[1].text).map_err(|e| shift(e, fields[1].pos))?;
            return Ok(FunctionSpec::Anf(poly));
        }
        _ => {
            return Err(Error::UnknownFamily(name));
        }
    };
    Ok(FunctionSpec::Family(family))
}

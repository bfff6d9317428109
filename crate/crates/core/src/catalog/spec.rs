//! `GroupSpec`, its JSON form and the inline `kind:param:param` grammar.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::Elem;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+", alias = "plus")]
    Plus,
    #[serde(rename = "-", alias = "minus")]
    Minus,
}

/// How the complement of a semidirect product acts on the normal factor.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ActionSpec {
    Trivial,
    /// Elements outside the unique index-2 subgroup of the complement invert the (abelian)
    /// normal factor.
    Inversion,
    /// The complement is cyclic; its first element of full order acts by `x -> x^k` on the
    /// abelian normal factor.
    Power {
        k: u64,
    },
    /// `images[j][x]` is the image of normal element `x` under complement element
    /// `generators[j]`; indices refer to the built factors.
    Images {
        generators: Vec<Elem>,
        images: Vec<Vec<Elem>>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GroupSpec {
    Cyclic {
        n: u64,
    },
    /// Direct product of cyclic groups of the given orders, in any order.
    Abelian {
        factors: Vec<u64>,
    },
    /// Symmetries of the regular `n`-gon, order `2n`.
    Dihedral {
        n: u64,
    },
    /// `<a, x | a^2n, x^2 a^-n, x a x^-1 a>`, order `4n`.
    Dicyclic {
        n: u64,
    },
    Symmetric {
        n: u32,
    },
    Alternating {
        n: u32,
    },
    /// Upper unitriangular 3x3 matrices over `Z/p`.
    Heisenberg {
        p: u64,
    },
    /// Extraspecial group of order `p^(1 + 2 rank)`.
    Extraspecial {
        p: u64,
        sign: Sign,
        #[serde(default = "one")]
        rank: u32,
    },
    /// `<a, b | a^m, b^n, b a b^-1 a^-r>`.
    Metacyclic {
        m: u64,
        n: u64,
        r: u64,
    },
    Direct {
        factors: Vec<GroupSpec>,
    },
    Semidirect {
        normal: Box<GroupSpec>,
        complement: Box<GroupSpec>,
        action: ActionSpec,
    },
    /// `Z/center` by `base`, with `cocycle[g][h]` the factor set on base element indices.
    CentralExt {
        base: Box<GroupSpec>,
        center: u64,
        cocycle: Vec<Vec<u64>>,
    },
    Presentation {
        text: String,
    },
    /// Generators in cycle notation, points numbered from 1.
    Permutation {
        generators: Vec<String>,
    },
}

fn one() -> u32 {
    1
}

impl GroupSpec {
    pub fn trivial() -> Self {
        GroupSpec::Cyclic { n: 1 }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            GroupSpec::Cyclic { .. } => "cyclic",
            GroupSpec::Abelian { .. } => "abelian",
            GroupSpec::Dihedral { .. } => "dihedral",
            GroupSpec::Dicyclic { .. } => "dicyclic",
            GroupSpec::Symmetric { .. } => "symmetric",
            GroupSpec::Alternating { .. } => "alternating",
            GroupSpec::Heisenberg { .. } => "heisenberg",
            GroupSpec::Extraspecial { .. } => "extraspecial",
            GroupSpec::Metacyclic { .. } => "metacyclic",
            GroupSpec::Direct { .. } => "direct",
            GroupSpec::Semidirect { .. } => "semidirect",
            GroupSpec::CentralExt { .. } => "central_ext",
            GroupSpec::Presentation { .. } => "presentation",
            GroupSpec::Permutation { .. } => "permutation",
        }
    }

    /// Accepts either the JSON form (anything starting with `{`) or the inline grammar.
    pub fn parse(text: &str) -> Result<Self> {
        let trimmed = text.trim();
        if trimmed.starts_with('{') {
            serde_json::from_str(trimmed).map_err(|e| Error::Parse {
                line: e.line(),
                column: e.column(),
                message: e.to_string(),
            })
        } else {
            parse_inline(text)
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("specs always serialize")
    }

    /// The inline form, when this group has one.
    pub fn inline(&self) -> Option<String> {
        let join = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(":");
        Some(match self {
            GroupSpec::Cyclic { n: 1 } => "trivial".into(),
            GroupSpec::Cyclic { n } => format!("cyclic:{n}"),
            GroupSpec::Abelian { factors } if factors.is_empty() => "abelian".into(),
            GroupSpec::Abelian { factors } => format!("abelian:{}", join(factors)),
            GroupSpec::Dihedral { n } => format!("dihedral:{n}"),
            GroupSpec::Dicyclic { n } => format!("dicyclic:{n}"),
            GroupSpec::Symmetric { n } => format!("symmetric:{n}"),
            GroupSpec::Alternating { n } => format!("alternating:{n}"),
            GroupSpec::Heisenberg { p } => format!("heisenberg:{p}"),
            GroupSpec::Extraspecial { p, sign, rank } => {
                let s = if *sign == Sign::Plus { '+' } else { '-' };
                if *rank == 1 {
                    format!("extraspecial:{p}:{s}")
                } else {
                    format!("extraspecial:{p}:{s}:{rank}")
                }
            }
            GroupSpec::Metacyclic { m, n, r } => format!("metacyclic:{m}:{n}:{r}"),
            GroupSpec::Direct { factors } if factors.len() >= 2 => {
                let parts: Option<Vec<String>> = factors
                    .iter()
                    .map(|f| match f {
                        // Raw kinds run to the end of the text and cannot be factors.
                        GroupSpec::Direct { .. }
                        | GroupSpec::Presentation { .. }
                        | GroupSpec::Permutation { .. } => None,
                        _ => f.inline(),
                    })
                    .collect();
                parts?.join("*")
            }
            GroupSpec::Presentation { text } if !text.contains('\n') => {
                format!("presentation:{text}")
            }
            GroupSpec::Permutation { generators }
                if !generators.iter().any(|g| g.contains(';')) =>
            {
                format!("permutation:{}", generators.join(";"))
            }
            _ => return None,
        })
    }
}

/// Inline form when there is one, JSON otherwise.
impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.inline() {
            Some(s) => f.write_str(&s),
            None => f.write_str(&self.to_json()),
        }
    }
}

impl FromStr for GroupSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GroupSpec::parse(s)
    }
}

fn parse_error(column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line: 1,
        column,
        message: message.into(),
    }
}

/// ```text
/// spec    := raw | product
/// raw     := "presentation:" TEXT | "permutation:" CYCLES (";" CYCLES)*
/// product := atom ("*" atom)*
/// atom    := KIND (":" PARAM)*
/// ```
fn parse_inline(text: &str) -> Result<GroupSpec> {
    let lead = text.len() - text.trim_start().len();
    let body = text.trim();
    if body.is_empty() {
        return Err(parse_error(1, "empty group spec"));
    }
    for raw in ["presentation:", "permutation:"] {
        if let Some(rest) = body.strip_prefix(raw) {
            return Ok(if raw == "presentation:" {
                GroupSpec::Presentation {
                    text: rest.trim().to_string(),
                }
            } else {
                GroupSpec::Permutation {
                    generators: rest
                        .split(';')
                        .map(|g| g.trim().to_string())
                        .filter(|g| !g.is_empty())
                        .collect(),
                }
            });
        }
    }
    let mut factors = Vec::new();
    let mut offset = lead;
    for part in body.split('*') {
        factors.push(parse_atom(part, offset)?);
        offset += part.len() + 1;
    }
    Ok(if factors.len() == 1 {
        factors.pop().unwrap()
    } else {
        GroupSpec::Direct { factors }
    })
}

fn parse_atom(text: &str, offset: usize) -> Result<GroupSpec> {
    let column = offset + text.len() - text.trim_start().len() + 1;
    let mut fields = text.trim().split(':');
    let kind = fields.next().unwrap_or_default().to_ascii_lowercase();
    let params: Vec<&str> = fields.map(str::trim).collect();
    let number = |i: usize| -> Result<u64> {
        let p = params
            .get(i)
            .ok_or_else(|| parse_error(column, format!("{kind} needs parameter {}", i + 1)))?;
        p.parse::<u64>().map_err(|_| {
            parse_error(
                column,
                format!("{kind}: expected a non-negative integer, found {p:?}"),
            )
        })
    };
    let arity = |n: usize| -> Result<()> {
        if params.len() == n {
            Ok(())
        } else {
            Err(parse_error(
                column,
                format!("{kind} takes {n} parameter(s), found {}", params.len()),
            ))
        }
    };
    let small = |v: u64| -> Result<u32> {
        u32::try_from(v)
            .map_err(|_| parse_error(column, format!("{kind}: parameter {v} too large")))
    };
    Ok(match kind.as_str() {
        "trivial" => {
            arity(0)?;
            GroupSpec::trivial()
        }
        "cyclic" | "z" => {
            arity(1)?;
            GroupSpec::Cyclic { n: number(0)? }
        }
        "abelian" => GroupSpec::Abelian {
            factors: (0..params.len()).map(number).collect::<Result<_>>()?,
        },
        "dihedral" | "d" => {
            arity(1)?;
            GroupSpec::Dihedral { n: number(0)? }
        }
        "dicyclic" | "q" => {
            arity(1)?;
            GroupSpec::Dicyclic { n: number(0)? }
        }
        "symmetric" | "s" => {
            arity(1)?;
            GroupSpec::Symmetric {
                n: small(number(0)?)?,
            }
        }
        "alternating" | "a" => {
            arity(1)?;
            GroupSpec::Alternating {
                n: small(number(0)?)?,
            }
        }
        "heisenberg" => {
            arity(1)?;
            GroupSpec::Heisenberg { p: number(0)? }
        }
        "extraspecial" => {
            if params.len() != 2 && params.len() != 3 {
                return Err(parse_error(
                    column,
                    "extraspecial takes p, a sign and optionally a rank",
                ));
            }
            let sign = match params[1] {
                "+" | "plus" => Sign::Plus,
                "-" | "minus" => Sign::Minus,
                other => {
                    return Err(parse_error(
                        column,
                        format!("expected + or -, found {other:?}"),
                    ))
                }
            };
            let rank = if params.len() == 3 {
                small(number(2)?)?
            } else {
                1
            };
            GroupSpec::Extraspecial {
                p: number(0)?,
                sign,
                rank,
            }
        }
        "metacyclic" => {
            arity(3)?;
            GroupSpec::Metacyclic {
                m: number(0)?,
                n: number(1)?,
                r: number(2)?,
            }
        }
        "" => return Err(parse_error(column, "missing group kind")),
        other => {
            return Err(parse_error(
                column,
                format!("unknown group kind {other:?}; composite kinds need the JSON form"),
            ))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inline_forms_parse() {
        assert_eq!(
            GroupSpec::parse("dihedral:4").unwrap(),
            GroupSpec::Dihedral { n: 4 }
        );
        assert_eq!(GroupSpec::parse(" trivial ").unwrap(), GroupSpec::trivial());
        assert_eq!(
            GroupSpec::parse("abelian:2:4").unwrap(),
            GroupSpec::Abelian {
                factors: vec![2, 4]
            }
        );
        assert_eq!(
            GroupSpec::parse("extraspecial:2:-:2").unwrap(),
            GroupSpec::Extraspecial {
                p: 2,
                sign: Sign::Minus,
                rank: 2
            }
        );
        assert_eq!(
            GroupSpec::parse("symmetric:3*cyclic:2").unwrap(),
            GroupSpec::Direct {
                factors: vec![GroupSpec::Symmetric { n: 3 }, GroupSpec::Cyclic { n: 2 }]
            }
        );
        assert_eq!(
            GroupSpec::parse("permutation:(1 2 3); (1 2)").unwrap(),
            GroupSpec::Permutation {
                generators: vec!["(1 2 3)".into(), "(1 2)".into()]
            }
        );
        assert_eq!(
            GroupSpec::parse("presentation:gens: a,b; rels: a^2, b^3, (ab)^2").unwrap(),
            GroupSpec::Presentation {
                text: "gens: a,b; rels: a^2, b^3, (ab)^2".into()
            }
        );
    }

    #[test]
    fn json_form_matches_the_documented_example() {
        let s = GroupSpec::parse(r#"{"kind":"metacyclic","m":5,"n":4,"r":2}"#).unwrap();
        assert_eq!(s, GroupSpec::Metacyclic { m: 5, n: 4, r: 2 });
        assert_eq!(s.to_json(), r#"{"kind":"metacyclic","m":5,"n":4,"r":2}"#);
        let e = GroupSpec::parse(r#"{"kind":"extraspecial","p":2,"sign":"+"}"#).unwrap();
        assert_eq!(e.inline().unwrap(), "extraspecial:2:+");
    }

    #[test]
    fn parse_errors_carry_positions() {
        match GroupSpec::parse("cyclic:4*dihedral:x") {
            Err(Error::Parse {
                line: 1,
                column: 10,
                ..
            }) => {}
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            GroupSpec::parse("{\"kind\":\"cyclic\"}"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            GroupSpec::parse("cyclic"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            GroupSpec::parse("bogus:3"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(GroupSpec::parse(""), Err(Error::Parse { .. })));
    }

    #[test]
    fn display_round_trips() {
        let specs = [
            GroupSpec::trivial(),
            GroupSpec::Abelian {
                factors: vec![2, 2, 3],
            },
            GroupSpec::Metacyclic { m: 7, n: 3, r: 2 },
            GroupSpec::Direct {
                factors: vec![GroupSpec::Dicyclic { n: 2 }, GroupSpec::Cyclic { n: 2 }],
            },
            GroupSpec::Semidirect {
                normal: Box::new(GroupSpec::Abelian {
                    factors: vec![3, 3],
                }),
                complement: Box::new(GroupSpec::Cyclic { n: 2 }),
                action: ActionSpec::Inversion,
            },
        ];
        for s in specs {
            assert_eq!(GroupSpec::parse(&s.to_string()).unwrap(), s);
        }
    }
}

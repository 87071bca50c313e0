//! The TRN v1 text format.
//!
//! ```text
//! alphabet: <n>
//! states: <name> <name> ...
//! <name>: <i>|<o>-><target> ...
//! ```
//!
//! One line per state in declared order, exactly one `i|o->target` triple per
//! input letter in ascending order. `#` starts a comment. ASCII, LF endings.
//! [`serialize_trn`] emits exactly this shape.

use crate::error::{Error, Result};
use crate::transducer::{RawState, RawTransducer, Transducer};

pub fn parse_trn(text: &str) -> Result<Transducer> {
    let raw = parse_raw(text)?;
    Transducer::validate(&raw)
}

pub fn parse_raw(text: &str) -> Result<RawTransducer> {
    let mut lines = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let body = match line.find('#') {
            Some(pos) => &line[..pos],
            None => line,
        };
        if !body.trim().is_empty() {
            lines.push((idx + 1, body.trim()));
        }
    }
    let mut it = lines.into_iter();

    let (ln, first) = it.next().ok_or(Error::Parse {
        line: 1,
        message: "empty file".into(),
    })?;
    let alphabet = first
        .strip_prefix("alphabet:")
        .map(str::trim)
        .and_then(|v| v.parse::<usize>().ok())
        .ok_or(Error::Parse {
            line: ln,
            message: "expected `alphabet: <n>`".into(),
        })?;

    let (ln, second) = it.next().ok_or(Error::Parse {
        line: ln,
        message: "missing states line".into(),
    })?;
    let names: Vec<String> = second
        .strip_prefix("states:")
        .ok_or(Error::Parse {
            line: ln,
            message: "expected `states: <name> ...`".into(),
        })?
        .split_whitespace()
        .map(str::to_string)
        .collect();
    if names.is_empty() {
        return Err(Error::Parse {
            line: ln,
            message: "no states declared".into(),
        });
    }
    for name in &names {
        if name.contains(':') || name.contains('#') || name.contains('|') {
            return Err(Error::Parse {
                line: ln,
                message: format!("state name {name:?} contains a reserved character"),
            });
        }
    }

    let mut states = Vec::with_capacity(names.len());
    for name in &names {
        let (ln, row) = it.next().ok_or(Error::Parse {
            line: 0,
            message: format!("missing row for state {name}"),
        })?;
        let (row_name, rest) = row.split_once(':').ok_or(Error::Parse {
            line: ln,
            message: "expected `<name>: ...`".into(),
        })?;
        if row_name.trim() != name {
            return Err(Error::Parse {
                line: ln,
                message: format!(
                    "row for {} found where {} was declared",
                    row_name.trim(),
                    name
                ),
            });
        }
        let mut transitions = Vec::new();
        for triple in rest.split_whitespace() {
            let (io, target) = triple.split_once("->").ok_or(Error::Parse {
                line: ln,
                message: format!("expected `i|o->target`, found {triple:?}"),
            })?;
            let (i, o) = io.split_once('|').ok_or(Error::Parse {
                line: ln,
                message: format!("expected `i|o`, found {io:?}"),
            })?;
            let input = i.parse::<usize>().map_err(|_| Error::Parse {
                line: ln,
                message: format!("invalid input letter {i:?}"),
            })?;
            let output = o.parse::<usize>().map_err(|_| Error::Parse {
                line: ln,
                message: format!("invalid output letter {o:?}"),
            })?;
            transitions.push((input, output, target.to_string()));
        }
        states.push(RawState {
            name: name.clone(),
            transitions,
        });
    }
    if let Some((ln, extra)) = it.next() {
        return Err(Error::Parse {
            line: ln,
            message: format!("unexpected trailing line {extra:?}"),
        });
    }
    Ok(RawTransducer { alphabet, states })
}

/// Canonical serialization: ascending letters, single spaces, LF endings.
pub fn serialize_trn(t: &Transducer) -> String {
    let mut s = String::new();
    s.push_str(&format!("alphabet: {}\n", t.alphabet()));
    s.push_str("states:");
    for name in t.state_names() {
        s.push(' ');
        s.push_str(name);
    }
    s.push('\n');
    for q in 0..t.state_count() {
        s.push_str(t.state_name(q));
        s.push(':');
        for x in 0..t.alphabet() {
            s.push_str(&format!(
                " {}|{}->{}",
                x,
                t.out(q, x),
                t.state_name(t.next(q, x))
            ));
        }
        s.push('\n');
    }
    s
}

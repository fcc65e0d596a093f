//! Line-oriented netlist text format.
//!
//! ```text
//! circuit <name>
//! inputs <w1> <w2> ...
//! gate <id> <KIND> <src1>[!] [<src2>[!]]
//! outputs <NAME>=<wire> ...
//! ```
//!
//! `#` starts a comment, `!` marks an inverted gate input. Gate kinds are
//! case-insensitive.

use std::fmt::Write as _;

use super::{is_identifier, Gate, Location, Netlist, NetlistError, SourceMap, WireRef};
use crate::gates::GateKind;

struct Token<'a> {
    text: &'a str,
    loc: Location,
}

fn tokenize(line: &str, line_no: usize) -> Vec<Token<'_>> {
    let code = line.split('#').next().unwrap_or("");
    let mut out = Vec::new();
    let mut start: Option<usize> = None;
    for (i, c) in code.char_indices().chain(std::iter::once((code.len(), ' '))) {
        match (c.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push(Token {
                    text: &code[s..i],
                    loc: Location {
                        line: line_no,
                        column: code[..s].chars().count() + 1,
                    },
                });
                start = None;
            }
            _ => {}
        }
    }
    out
}

fn syntax(loc: Location, message: impl Into<String>) -> NetlistError {
    NetlistError::Syntax {
        loc,
        message: message.into(),
    }
}

fn identifier(tok: &Token<'_>, what: &str) -> Result<String, NetlistError> {
    if is_identifier(tok.text) {
        Ok(tok.text.to_string())
    } else {
        Err(syntax(tok.loc, format!("invalid {what} `{}`", tok.text)))
    }
}

fn wire_ref(tok: &Token<'_>) -> Result<WireRef, NetlistError> {
    let (name, inverted) = match tok.text.strip_suffix('!') {
        Some(n) => (n, true),
        None => (tok.text, false),
    };
    if !is_identifier(name) {
        return Err(syntax(tok.loc, format!("invalid wire reference `{}`", tok.text)));
    }
    Ok(WireRef {
        name: name.to_string(),
        inverted,
    })
}

/// Parses netlist source into a validated [`Netlist`].
pub fn parse_netlist(text: &str) -> Result<Netlist, NetlistError> {
    let mut name: Option<String> = None;
    let mut inputs: Option<Vec<String>> = None;
    let mut outputs: Option<Vec<(String, String)>> = None;
    let mut gates = Vec::new();
    let mut map = SourceMap::default();
    let mut last_line = 1;

    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let toks = tokenize(line, line_no);
        let Some(head) = toks.first() else { continue };
        let args = &toks[1..];
        let end_loc = Location {
            line: line_no,
            column: line.split('#').next().unwrap_or("").trim_end().chars().count() + 1,
        };

        if name.is_none() && head.text != "circuit" {
            return Err(syntax(head.loc, "expected `circuit <name>` first"));
        }
        match head.text {
            "circuit" => {
                if name.is_some() {
                    return Err(syntax(head.loc, "duplicate `circuit` declaration"));
                }
                match args {
                    [n] => name = Some(identifier(n, "circuit name")?),
                    [] => return Err(syntax(end_loc, "expected circuit name")),
                    [_, extra, ..] => return Err(syntax(extra.loc, "unexpected token after circuit name")),
                }
            }
            "inputs" => {
                if inputs.is_some() {
                    return Err(syntax(head.loc, "duplicate `inputs` declaration"));
                }
                if args.is_empty() {
                    return Err(syntax(end_loc, "expected at least one input name"));
                }
                let mut names = Vec::with_capacity(args.len());
                for t in args {
                    names.push(identifier(t, "input name")?);
                    map.inputs.push(t.loc);
                }
                inputs = Some(names);
            }
            "gate" => {
                let (id_tok, kind_tok, srcs) = match args {
                    [id, kind, srcs @ ..] => (id, kind, srcs),
                    [_] => return Err(syntax(end_loc, "expected gate kind")),
                    [] => return Err(syntax(end_loc, "expected gate id")),
                };
                let id = identifier(id_tok, "gate id")?;
                let kind: GateKind =
                    kind_tok
                        .text
                        .parse()
                        .map_err(|_| NetlistError::UnknownGateKind {
                            loc: Some(kind_tok.loc),
                            kind: kind_tok.text.to_string(),
                        })?;
                let arity = kind.arity();
                if srcs.len() < arity {
                    return Err(syntax(
                        end_loc,
                        format!("{kind} gate `{id}` needs {arity} source(s), found {}", srcs.len()),
                    ));
                }
                if let Some(extra) = srcs.get(arity) {
                    return Err(syntax(
                        extra.loc,
                        format!("{kind} gate `{id}` takes {arity} source(s)"),
                    ));
                }
                let a = wire_ref(&srcs[0])?;
                let b = srcs.get(1).map(wire_ref).transpose()?;
                map.gate_ids.push(id_tok.loc);
                map.gate_sources.push(srcs.iter().map(|t| t.loc).collect());
                gates.push(Gate { id, kind, a, b });
            }
            "outputs" => {
                if outputs.is_some() {
                    return Err(syntax(head.loc, "duplicate `outputs` declaration"));
                }
                if args.is_empty() {
                    return Err(syntax(end_loc, "expected at least one NAME=wire output"));
                }
                let mut outs = Vec::with_capacity(args.len());
                for t in args {
                    let Some((out_name, wire)) = t.text.split_once('=') else {
                        return Err(syntax(t.loc, format!("expected NAME=wire, found `{}`", t.text)));
                    };
                    let wire_loc = Location {
                        line: t.loc.line,
                        column: t.loc.column + out_name.chars().count() + 1,
                    };
                    if !is_identifier(out_name) {
                        return Err(syntax(t.loc, format!("invalid output name `{out_name}`")));
                    }
                    if !is_identifier(wire) {
                        return Err(syntax(wire_loc, format!("invalid wire `{wire}`")));
                    }
                    map.output_names.push(t.loc);
                    map.output_wires.push(wire_loc);
                    outs.push((out_name.to_string(), wire.to_string()));
                }
                outputs = Some(outs);
            }
            other => {
                return Err(syntax(head.loc, format!("unknown statement `{other}`")));
            }
        }
    }

    let eof = Location {
        line: last_line,
        column: 1,
    };
    let name = name.ok_or_else(|| syntax(eof, "missing `circuit` declaration"))?;
    let inputs = inputs.ok_or_else(|| syntax(eof, "missing `inputs` declaration"))?;
    let outputs = outputs.ok_or_else(|| syntax(eof, "missing `outputs` declaration"))?;
    Netlist::build(name, inputs, gates, outputs, Some(&map))
}

/// Canonical text form; `parse_netlist` of the result equals `n`.
pub fn serialize_netlist(n: &Netlist) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "circuit {}", n.name());
    let _ = writeln!(s, "inputs {}", n.inputs().join(" "));
    for g in n.gates() {
        let _ = write!(s, "gate {} {} {}", g.id, g.kind, g.a);
        if let Some(b) = &g.b {
            let _ = write!(s, " {b}");
        }
        s.push('\n');
    }
    let outs: Vec<String> = n.outputs().iter().map(|(o, w)| format!("{o}={w}")).collect();
    let _ = writeln!(s, "outputs {}", outs.join(" "));
    s
}

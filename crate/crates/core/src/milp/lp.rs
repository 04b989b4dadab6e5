use super::{MilpModel, VarId, VarKind};
use std::fmt::Write as _;

const WRAP: usize = 200;

/// Writes the model in LP format. Output is a pure function of the model.
pub fn emit_lp(model: &MilpModel) -> String {
    let mut out = String::new();
    out.push_str("\\ heliplan firefighting helicopter model\n");
    for note in &model.notes {
        let _ = writeln!(out, "\\ {note}");
    }
    out.push_str("Maximize\n");
    write_expr(&mut out, " obj:", &model.objective, model, "");
    out.push_str("Subject To\n");
    for row in &model.rows {
        let head = format!(" {}:", row.key.name());
        let tail = format!(" {} {}", row.sense.symbol(), number(row.rhs));
        write_expr(&mut out, &head, &row.terms, model, &tail);
    }
    out.push_str("Bounds\n");
    for v in &model.variables {
        if v.kind == VarKind::Free {
            let _ = writeln!(out, " {} free", v.name);
        }
    }
    out.push_str("Binaries\n");
    let mut line = String::new();
    for v in model.variables.iter().filter(|v| v.kind == VarKind::Binary) {
        if line.len() + v.name.len() + 1 > WRAP {
            let _ = writeln!(out, "{line}");
            line.clear();
        }
        line.push(' ');
        line.push_str(&v.name);
    }
    if !line.is_empty() {
        let _ = writeln!(out, "{line}");
    }
    out.push_str("End\n");
    out
}

fn write_expr(out: &mut String, head: &str, terms: &[(VarId, f64)], model: &MilpModel, tail: &str) {
    let mut line = head.to_string();
    if terms.is_empty() {
        // LP readers reject an empty left-hand side.
        if let Some(v) = model.variables.first() {
            line.push_str(&format!(" 0 {}", v.name));
        }
    }
    for &(v, c) in terms {
        let name = &model.variables[v].name;
        let piece = if c == 1.0 {
            format!(" + {name}")
        } else if c == -1.0 {
            format!(" - {name}")
        } else if c < 0.0 {
            format!(" - {} {name}", number(-c))
        } else {
            format!(" + {} {name}", number(c))
        };
        if line.len() + piece.len() > WRAP {
            let _ = writeln!(out, "{line}");
            line = String::from("  ");
        }
        line.push_str(&piece);
    }
    line.push_str(tail);
    let _ = writeln!(out, "{line}");
}

fn number(x: f64) -> String {
    if x == x.trunc() && x.abs() < 1e15 {
        format!("{}", x as i64)
    } else {
        format!("{x}")
    }
}

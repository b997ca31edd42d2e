//! Export to the CPLEX LP text format, for inspecting models with external
//! tools.

use std::fmt::Write;

use crate::expr::LinExpr;
use crate::model::{Cmp, MilpModel, VarKind};

fn sanitize(name: &str) -> String {
    let mut out: String = name
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || "_.[]{}()!\"#$%&/,;?@'`|~".contains(c) {
                c
            } else {
                '_'
            }
        })
        .collect();
    // LP names may not start with a digit, a period or the letter e/E.
    if out
        .chars()
        .next()
        .map_or(true, |c| c.is_ascii_digit() || c == '.' || c == 'e' || c == 'E')
    {
        out.insert(0, '_');
    }
    out
}

fn write_expr(out: &mut String, expr: &LinExpr, names: &[String]) {
    let mut first = true;
    for &(v, c) in expr.terms() {
        let sign = if c < 0.0 { "-" } else { "+" };
        if first && c >= 0.0 {
            let _ = write!(out, " {} {}", c.abs(), names[v.index()]);
        } else {
            let _ = write!(out, " {sign} {} {}", c.abs(), names[v.index()]);
        }
        first = false;
    }
    if first {
        out.push_str(" 0");
    }
}

impl MilpModel {
    pub fn to_lp_string(&self) -> String {
        let names: Vec<String> = self.vars().iter().map(|v| sanitize(&v.name)).collect();
        let mut out = String::new();
        let _ = writeln!(out, "\\ model {}", self.name());
        let constant = self.objective().constant_part();
        if constant != 0.0 {
            let _ = writeln!(out, "\\ objective constant {constant}");
        }
        out.push_str("Minimize\n obj:");
        write_expr(&mut out, self.objective(), &names);
        out.push_str("\nSubject To\n");
        for (i, row) in self.constraints().iter().enumerate() {
            let _ = write!(out, " r{i}_{}:", sanitize(&row.name));
            write_expr(&mut out, &row.lhs, &names);
            let op = match row.cmp {
                Cmp::Le => "<=",
                Cmp::Ge => ">=",
                Cmp::Eq => "=",
            };
            // Adding 0.0 turns -0 into 0.
            let _ = writeln!(out, " {op} {}", row.rhs + 0.0);
        }
        out.push_str("Bounds\n");
        for (info, name) in self.vars().iter().zip(&names) {
            if let VarKind::Continuous { lower, upper } = info.kind {
                let _ = writeln!(out, " {lower} <= {name} <= {upper}");
            }
        }
        let binaries: Vec<&String> = self
            .vars()
            .iter()
            .zip(&names)
            .filter(|(i, _)| i.kind.is_binary())
            .map(|(_, n)| n)
            .collect();
        if !binaries.is_empty() {
            out.push_str("Binaries\n");
            for b in binaries {
                let _ = writeln!(out, " {b}");
            }
        }
        out.push_str("End\n");
        out
    }
}

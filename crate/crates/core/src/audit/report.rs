//! Text serialisations of an [`AuditReport`]: one `key=value` per line, or a JSON
//! document. Both carry `t`, `s`, `phi_num`, `phi_den` and one `checks[name]` entry per
//! check with value `pass`, `fail` or `skip`.

use std::fmt::{Display, Write};

use serde_json::{json, Map, Number, Value};

use super::{AuditReport, CheckKind};

fn join<T: Display>(items: impl IntoIterator<Item = T>, sep: &str) -> String {
    items
        .into_iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(sep)
}

fn table(rows: &[Vec<i64>]) -> String {
    join(rows.iter().map(|r| join(r, ",")), ";")
}

fn kind_name(kind: CheckKind) -> &'static str {
    match kind {
        CheckKind::Identity => "identity",
        CheckKind::Claim { enforced: true } => "claim-enforced",
        CheckKind::Claim { enforced: false } => "claim",
        CheckKind::Info => "info",
    }
}

fn big_number(text: String) -> Value {
    text.parse::<Number>().map(Value::Number).unwrap_or(Value::String(text))
}

impl AuditReport {
    pub fn to_key_value(&self) -> String {
        let mut out = String::new();
        let mut line = |key: &str, value: String| {
            let _ = writeln!(out, "{key}={value}");
        };
        let groups = &self.grouping;
        line("n", self.n.to_string());
        line("k", self.k.to_string());
        line("balanced", self.balanced.to_string());
        line("local_minimum", self.local_minimum.to_string());
        line("f", self.f.to_string());
        line("g", self.g.to_string());
        line("threshold", groups.threshold.to_string());
        line("t", self.t().to_string());
        line("ell", groups.ell().to_string());
        line("s", self.s().to_string());
        line("groups", join(groups.groups.iter().map(|g| join(g, ",")), "|"));
        line("group_min", join(&groups.lo, ","));
        line("group_max", join(&groups.hi, ","));
        line("widths", join(groups.widths(), ","));
        line("gaps", join(groups.gaps(), ","));
        line(
            "classes",
            join(
                self.classification.classes.iter().map(|class| {
                    join(class.iter().map(|&(i, j)| format!("({},{})", i + 1, j + 1)), ",")
                }),
                "|",
            ),
        );
        line("y", table(&self.tally.y));
        line("p", table(&self.tally.p));
        line("z", table(&self.tally.z));
        line("p_vec", join(&self.tally.p_vec, ","));
        line("xi", join(&self.tally.xi, ","));
        line("levels_rows", table(&self.levels.rows));
        line("levels_b", join(&self.levels.b, ","));
        line("levels_epsilon", join(&self.levels.epsilon, ","));
        line("levels_a", join(&self.levels.a, ","));
        line("levels_rank", self.levels.rank.to_string());
        line("levels_max_deviation", self.levels.max_deviation.to_string());
        line("prefix_z", join(&self.prefix.sums, ","));
        line("down_swaps", self.prefix.down_swaps.to_string());
        line("nu", join(&self.phi.nu, ","));
        line("phi_num", self.phi.phi.numer().to_string());
        line("phi_den", self.phi.phi.denom().to_string());
        line("phi_expects_negative", self.phi.expects_negative.to_string());
        line("phi_expects_nonnegative", self.phi.expects_nonnegative.to_string());
        line("phi_contradiction", self.phi.contradiction().to_string());
        for c in &self.checks {
            line(&format!("checks[{}]", c.name), c.status.as_str().to_string());
            line(&format!("checks[{}].kind", c.name), kind_name(c.kind).to_string());
            line(&format!("checks[{}].lhs", c.name), c.lhs.clone());
            line(&format!("checks[{}].rhs", c.name), c.rhs.clone());
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let checks: Map<String, Value> = self
            .checks
            .iter()
            .map(|c| (c.name.clone(), Value::from(c.status.as_str())))
            .collect();
        let details: Vec<Value> = self
            .checks
            .iter()
            .map(|c| {
                json!({
                    "name": c.name,
                    "kind": kind_name(c.kind),
                    "status": c.status.as_str(),
                    "lhs": c.lhs,
                    "rhs": c.rhs,
                })
            })
            .collect();
        let rationals = |v: &[num_rational::BigRational]| -> Vec<String> {
            v.iter().map(ToString::to_string).collect()
        };
        json!({
            "n": self.n,
            "k": self.k,
            "balanced": self.balanced,
            "local_minimum": self.local_minimum,
            "f": self.f,
            "g": self.g,
            "threshold": self.grouping.threshold.to_string(),
            "t": self.t(),
            "ell": self.grouping.ell(),
            "s": self.s(),
            "groups": self.grouping.groups,
            "classes": self.classification.classes.iter()
                .map(|c| c.iter().map(|&(i, j)| [i + 1, j + 1]).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
            "y": self.tally.y,
            "p": self.tally.p,
            "z": self.tally.z,
            "p_vec": self.tally.p_vec,
            "xi": self.tally.xi,
            "levels_a": rationals(&self.levels.a),
            "levels_rank": self.levels.rank,
            "prefix_z": self.prefix.sums,
            "down_swaps": self.prefix.down_swaps,
            "phi_num": big_number(self.phi.phi.numer().to_string()),
            "phi_den": big_number(self.phi.phi.denom().to_string()),
            "phi_contradiction": self.phi.contradiction(),
            "checks": checks,
            "check_details": details,
        })
    }
}

//! Conjunctive rules, rule sets, and their text form.
//!
//! ```text
//! Rule 1: If Clump thickness (A_1) <= 0.61 and Bare nuclei (A_6) <= 0.50 then benign
//! Default Rule: malignant
//! ```

use std::cmp::Ordering;
use std::fmt::Write as _;

use crate::dataset::Dataset;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Op {
    Le,
    Gt,
    Eq,
}

impl Op {
    fn rank(self) -> u8 {
        match self {
            Op::Eq => 0,
            Op::Gt => 1,
            Op::Le => 2,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Op::Le => "<=",
            Op::Gt => ">",
            Op::Eq => "=",
        }
    }
}

/// `x[attribute] op value`. For input rules `value` is in encoded space (a
/// categorical's encoded category value for `Eq`); for rules over hidden
/// clusters `attribute` is a hidden node and `value` a cluster index.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Condition {
    pub attribute: usize,
    pub op: Op,
    pub value: f64,
}

impl Condition {
    pub fn le(attribute: usize, value: f64) -> Self {
        Condition {
            attribute,
            op: Op::Le,
            value,
        }
    }

    pub fn gt(attribute: usize, value: f64) -> Self {
        Condition {
            attribute,
            op: Op::Gt,
            value,
        }
    }

    pub fn eq(attribute: usize, value: f64) -> Self {
        Condition {
            attribute,
            op: Op::Eq,
            value,
        }
    }

    pub fn matches(&self, x: &[f64]) -> bool {
        let v = x[self.attribute];
        match self.op {
            Op::Le => v <= self.value,
            Op::Gt => v > self.value,
            Op::Eq => v == self.value,
        }
    }

    fn order(&self, other: &Self) -> Ordering {
        self.attribute
            .cmp(&other.attribute)
            .then(self.op.rank().cmp(&other.op.rank()))
            .then(self.value.total_cmp(&other.value))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    pub conditions: Vec<Condition>,
    /// Class index, or cluster index for rules describing a hidden node.
    pub class: usize,
    /// Training patterns matched.
    pub support: usize,
    /// Matched training patterns whose label differs from `class`.
    pub errors: usize,
}

impl Rule {
    pub fn new(conditions: Vec<Condition>, class: usize) -> Self {
        Rule {
            conditions,
            class,
            support: 0,
            errors: 0,
        }
    }

    pub fn matches(&self, x: &[f64]) -> bool {
        self.conditions.iter().all(|c| c.matches(x))
    }

    /// Merges conditions per attribute (tightest `<=`, tightest `>`, a single
    /// `=`) and orders them by attribute. `None` when no point satisfies the
    /// conjunction.
    pub fn simplify(&self) -> Option<Rule> {
        let mut attrs: Vec<usize> = self.conditions.iter().map(|c| c.attribute).collect();
        attrs.sort_unstable();
        attrs.dedup();
        let mut out = Vec::new();
        for a in attrs {
            let mut upper: Option<f64> = None;
            let mut lower: Option<f64> = None;
            let mut equal: Option<f64> = None;
            for c in self.conditions.iter().filter(|c| c.attribute == a) {
                match c.op {
                    Op::Le => upper = Some(upper.map_or(c.value, |u| u.min(c.value))),
                    Op::Gt => lower = Some(lower.map_or(c.value, |l| l.max(c.value))),
                    Op::Eq => match equal {
                        Some(e) if e != c.value => return None,
                        _ => equal = Some(c.value),
                    },
                }
            }
            if let Some(e) = equal {
                if upper.is_some_and(|u| e > u) || lower.is_some_and(|l| e <= l) {
                    return None;
                }
                out.push(Condition::eq(a, e));
                continue;
            }
            if let (Some(l), Some(u)) = (lower, upper) {
                if l >= u {
                    return None;
                }
            }
            if let Some(l) = lower {
                out.push(Condition::gt(a, l));
            }
            if let Some(u) = upper {
                out.push(Condition::le(a, u));
            }
        }
        out.sort_by(Condition::order);
        Some(Rule {
            conditions: out,
            ..self.clone()
        })
    }

    /// Same conditions (in any order) and same consequent.
    pub fn same_logic(&self, other: &Rule) -> bool {
        if self.class != other.class || self.conditions.len() != other.conditions.len() {
            return false;
        }
        let mut a = self.conditions.clone();
        let mut b = other.conditions.clone();
        a.sort_by(Condition::order);
        b.sort_by(Condition::order);
        a == b
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RuleSet {
    pub rules: Vec<Rule>,
    pub default_class: usize,
}

impl RuleSet {
    pub fn default_only(class: usize) -> Self {
        RuleSet {
            rules: Vec::new(),
            default_class: class,
        }
    }

    /// Reported rule count; the default rule is included.
    pub fn rule_count(&self) -> usize {
        self.rules.len() + 1
    }

    /// Mean number of conditions over the non-default rules (0 when there are none).
    pub fn average_conditions(&self) -> f64 {
        if self.rules.is_empty() {
            0.0
        } else {
            self.rules.iter().map(|r| r.conditions.len()).sum::<usize>() as f64 / self.rules.len() as f64
        }
    }

    /// Renders the rule set in the report grammar. Every rule must have at
    /// least one condition.
    pub fn render(&self, dataset: &Dataset) -> String {
        let mut out = String::new();
        for (i, rule) in self.rules.iter().enumerate() {
            let conds: Vec<String> = rule.conditions.iter().map(|c| render_condition(c, dataset)).collect();
            let _ = writeln!(
                out,
                "Rule {}: If {} then {}",
                i + 1,
                conds.join(" and "),
                dataset.classes[rule.class]
            );
        }
        let _ = writeln!(out, "Default Rule: {}", dataset.classes[self.default_class]);
        out
    }

    /// Parses text produced by [`render`](Self::render). Support and error
    /// counts are not part of the text and come back as 0.
    pub fn parse(text: &str, dataset: &Dataset) -> Result<Self> {
        let class_of = |name: &str, line: usize| {
            dataset
                .classes
                .iter()
                .position(|c| c == name)
                .ok_or_else(|| Error::MalformedInput(format!("rules line {line}: unknown class `{name}`")))
        };
        let mut rules = Vec::new();
        let mut default_class = None;
        for (n, line) in text.lines().enumerate() {
            let n = n + 1;
            let line = line.trim_end();
            if line.is_empty() {
                continue;
            }
            if default_class.is_some() {
                return Err(Error::MalformedInput(format!(
                    "rules line {n}: text after the default rule"
                )));
            }
            if let Some(class) = line.strip_prefix("Default Rule: ") {
                default_class = Some(class_of(class, n)?);
                continue;
            }
            let bad = |m: &str| Error::MalformedInput(format!("rules line {n}: {m}"));
            let rest = line.strip_prefix("Rule ").ok_or_else(|| bad("expected `Rule`"))?;
            let (index, rest) = rest.split_once(": If ").ok_or_else(|| bad("expected `: If `"))?;
            if index.parse::<usize>().ok() != Some(rules.len() + 1) {
                return Err(bad("rules must be numbered from 1 in order"));
            }
            let (conds, class) = rest.rsplit_once(" then ").ok_or_else(|| bad("expected ` then `"))?;
            let conditions = conds
                .split(" and ")
                .map(|c| parse_condition(c, dataset).ok_or_else(|| bad(&format!("bad condition `{c}`"))))
                .collect::<Result<Vec<_>>>()?;
            rules.push(Rule::new(conditions, class_of(class, n)?));
        }
        let default_class = default_class.ok_or_else(|| Error::MalformedInput("rules: missing default rule".into()))?;
        Ok(RuleSet { rules, default_class })
    }
}

fn render_condition(c: &Condition, dataset: &Dataset) -> String {
    let label = dataset.attribute_label(c.attribute);
    let spec = &dataset.attributes[c.attribute];
    match c.op {
        Op::Eq => {
            let category = spec
                .category_of(c.value)
                .and_then(|i| spec.category_label(i))
                .map(str::to_string)
                .unwrap_or_else(|| format!("{:.2}", c.value));
            format!("{label} = {category}")
        }
        op => format!("{label} {} {:.2}", op.symbol(), c.value),
    }
}

fn parse_condition(text: &str, dataset: &Dataset) -> Option<Condition> {
    let open = text.find("(A_")?;
    let close = open + text[open..].find(')')?;
    let attribute = text[open + 3..close].parse::<usize>().ok()?.checked_sub(1)?;
    if attribute >= dataset.n_attributes() || text[..close + 1] != dataset.attribute_label(attribute) {
        return None;
    }
    let rest = &text[close + 1..];
    let (op, value) = if let Some(v) = rest.strip_prefix(" <= ") {
        (Op::Le, v)
    } else if let Some(v) = rest.strip_prefix(" > ") {
        (Op::Gt, v)
    } else {
        (Op::Eq, rest.strip_prefix(" = ")?)
    };
    let spec = &dataset.attributes[attribute];
    let value = match op {
        Op::Eq if spec.is_categorical() => {
            let n = spec.category_count()?;
            let index = (0..n).find(|&i| spec.category_label(i) == Some(value))?;
            spec.category_value(index)
        }
        _ => value.parse().ok()?,
    };
    Some(Condition { attribute, op, value })
}

//! Tabular benchmark data: schema, loading, [0,1] encoding and file-order splits.
//!
//! Loading yields a [`RawDataset`] holding the values exactly as they appear
//! in the file (categories as indices, `None` where the missing marker was
//! found). [`RawDataset::normalize`] turns it into an encoded [`Dataset`],
//! imputing missing values from a designated index range only, so test rows
//! never leak statistics into the encoding.

use std::fmt::Write as _;
use std::ops::Range;
use std::path::Path;

use crate::error::{Error, Result};
use crate::kv::{split_list, KeyValues};

#[derive(Debug, Clone, PartialEq)]
pub enum AttributeKind {
    Continuous {
        min: f64,
        max: f64,
    },
    Ordinal {
        min: f64,
        max: f64,
    },
    /// `categories` are the raw tokens in declared order; `labels` their
    /// display names (same length).
    Categorical {
        categories: Vec<String>,
        labels: Vec<String>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct AttributeSpec {
    pub name: String,
    pub kind: AttributeKind,
}

impl AttributeSpec {
    pub fn continuous(name: &str, min: f64, max: f64) -> Self {
        AttributeSpec {
            name: name.to_string(),
            kind: AttributeKind::Continuous { min, max },
        }
    }

    pub fn ordinal(name: &str, min: f64, max: f64) -> Self {
        AttributeSpec {
            name: name.to_string(),
            kind: AttributeKind::Ordinal { min, max },
        }
    }

    pub fn categorical(name: &str, categories: &[&str]) -> Self {
        AttributeSpec {
            name: name.to_string(),
            kind: AttributeKind::Categorical {
                categories: categories.iter().map(|c| c.to_string()).collect(),
                labels: categories.iter().map(|c| c.to_string()).collect(),
            },
        }
    }

    pub fn is_categorical(&self) -> bool {
        matches!(self.kind, AttributeKind::Categorical { .. })
    }

    /// Number of categories, or `None` for numeric attributes.
    pub fn category_count(&self) -> Option<usize> {
        match &self.kind {
            AttributeKind::Categorical { categories, .. } => Some(categories.len()),
            _ => None,
        }
    }

    /// Encoded value of category `index`: categories are spread evenly over [0,1].
    pub fn category_value(&self, index: usize) -> f64 {
        match self.category_count() {
            Some(n) if n > 1 => index as f64 / (n - 1) as f64,
            _ => 0.0,
        }
    }

    /// Inverse of [`category_value`](Self::category_value).
    pub fn category_of(&self, encoded: f64) -> Option<usize> {
        let n = self.category_count()?;
        (0..n).find(|&i| self.category_value(i) == encoded)
    }

    pub fn category_label(&self, index: usize) -> Option<&str> {
        match &self.kind {
            AttributeKind::Categorical { labels, .. } => labels.get(index).map(String::as_str),
            _ => None,
        }
    }

    fn validate(&self) -> Result<()> {
        match &self.kind {
            AttributeKind::Continuous { min, max } | AttributeKind::Ordinal { min, max } => {
                if !(min.is_finite() && max.is_finite()) || min > max {
                    return Err(Error::MalformedInput(format!(
                        "attribute `{}`: invalid range [{min}, {max}]",
                        self.name
                    )));
                }
            }
            AttributeKind::Categorical { categories, labels } => {
                if categories.is_empty() || categories.len() != labels.len() {
                    return Err(Error::MalformedInput(format!(
                        "attribute `{}`: categories and labels must be non-empty and aligned",
                        self.name
                    )));
                }
                for (i, c) in categories.iter().enumerate() {
                    if categories[..i].contains(c) {
                        return Err(Error::MalformedInput(format!(
                            "attribute `{}`: duplicate category `{c}`",
                            self.name
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Parses one raw field; `Ok(None)` for a missing marker.
    fn parse_raw(&self, field: &str, missing: &str) -> Result<Option<f64>> {
        if field == missing {
            return Ok(None);
        }
        match &self.kind {
            AttributeKind::Continuous { min, max } | AttributeKind::Ordinal { min, max } => {
                let v: f64 = field.parse().map_err(|_| {
                    Error::MalformedInput(format!("attribute `{}`: `{field}` is not a number", self.name))
                })?;
                if !v.is_finite() || v < *min || v > *max {
                    return Err(Error::MalformedInput(format!(
                        "attribute `{}`: {v} outside declared range [{min}, {max}]",
                        self.name
                    )));
                }
                Ok(Some(v))
            }
            AttributeKind::Categorical { categories, .. } => categories
                .iter()
                .position(|c| c == field)
                .map(|i| Some(i as f64))
                .ok_or_else(|| Error::MalformedInput(format!("attribute `{}`: unknown category `{field}`", self.name))),
        }
    }

    fn render_raw(&self, value: f64) -> String {
        match &self.kind {
            AttributeKind::Categorical { categories, .. } => categories[value as usize].clone(),
            _ => format!("{value}"),
        }
    }

    /// Min-max (or equal-spacing) encoding of a raw value. Returns `None` for
    /// a degenerate range.
    fn encode(&self, raw: f64) -> Option<f64> {
        match &self.kind {
            AttributeKind::Continuous { min, max } | AttributeKind::Ordinal { min, max } => {
                if max == min {
                    None
                } else {
                    Some((raw - min) / (max - min))
                }
            }
            AttributeKind::Categorical { .. } => Some(self.category_value(raw as usize)),
        }
    }
}

/// Column layout and attribute metadata for one data file.
#[derive(Debug, Clone, PartialEq)]
pub struct Schema {
    pub name: String,
    pub attributes: Vec<AttributeSpec>,
    /// Raw class tokens as they appear in the file.
    pub class_tokens: Vec<String>,
    pub class_names: Vec<String>,
    /// Position of the class label among the raw columns (id column included).
    pub class_column: usize,
    pub id_column: bool,
    pub missing: String,
}

impl Schema {
    pub fn column_count(&self) -> usize {
        self.attributes.len() + 1 + usize::from(self.id_column)
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::from_kv(&KeyValues::read(path)?)
    }

    pub fn from_kv(kv: &KeyValues) -> Result<Self> {
        let name = kv.get("name").unwrap_or("dataset").to_string();
        let id_column = kv.parse_or("id_column", false)?;
        let missing = kv.get("missing").unwrap_or("?").to_string();
        let class_tokens = kv
            .list("classes")
            .ok_or_else(|| Error::MalformedInput("missing key `classes`".into()))??;
        let class_names = match kv.list("class_names") {
            Some(names) => names?,
            None => class_tokens.clone(),
        };
        if class_tokens.len() < 2 || class_names.len() != class_tokens.len() {
            return Err(Error::MalformedInput(
                "need at least two classes with matching `class_names`".into(),
            ));
        }

        let mut attributes = Vec::new();
        loop {
            let idx = attributes.len() + 1;
            let prefix = format!("attribute.{idx}");
            let Some(kind) = kv.get(&format!("{prefix}.kind")) else {
                break;
            };
            let attr_name = kv
                .get(&format!("{prefix}.name"))
                .map(str::to_string)
                .unwrap_or_else(|| format!("A_{idx}"));
            let kind = match kind {
                "continuous" | "ordinal" => {
                    let key = format!("{prefix}.range");
                    let bounds = split_list(&key, kv.require(&key)?)?;
                    let parse = |s: &str| {
                        s.parse::<f64>()
                            .map_err(|_| Error::MalformedInput(format!("`{key}`: bad bound `{s}`")))
                    };
                    if bounds.len() != 2 {
                        return Err(Error::MalformedInput(format!("`{key}`: expected `min, max`")));
                    }
                    let (min, max) = (parse(&bounds[0])?, parse(&bounds[1])?);
                    if kind == "continuous" {
                        AttributeKind::Continuous { min, max }
                    } else {
                        AttributeKind::Ordinal { min, max }
                    }
                }
                "categorical" => {
                    let key = format!("{prefix}.categories");
                    let categories = split_list(&key, kv.require(&key)?)?;
                    let labels = match kv.list(&format!("{prefix}.labels")) {
                        Some(l) => l?,
                        None => categories.clone(),
                    };
                    AttributeKind::Categorical { categories, labels }
                }
                other => {
                    return Err(Error::MalformedInput(format!(
                        "`{prefix}.kind`: unknown kind `{other}`"
                    )))
                }
            };
            attributes.push(AttributeSpec { name: attr_name, kind });
        }
        if attributes.is_empty() {
            return Err(Error::MalformedInput("schema declares no attributes".into()));
        }
        let stray = kv.keys().find(|k| {
            k.strip_prefix("attribute.")
                .and_then(|rest| rest.split('.').next())
                .and_then(|n| n.parse::<usize>().ok())
                .is_some_and(|n| n == 0 || n > attributes.len())
        });
        if let Some(k) = stray {
            return Err(Error::MalformedInput(format!(
                "`{k}`: attribute indices must be contiguous from 1"
            )));
        }

        let schema = Schema {
            name,
            class_column: kv.parse_or("class_column", attributes.len() + usize::from(id_column))?,
            attributes,
            class_tokens,
            class_names,
            id_column,
            missing,
        };
        schema.validate()?;
        Ok(schema)
    }

    pub fn validate(&self) -> Result<()> {
        for a in &self.attributes {
            a.validate()?;
        }
        if self.class_column >= self.column_count() || (self.id_column && self.class_column == 0) {
            return Err(Error::MalformedInput(format!(
                "class column {} invalid for {} columns",
                self.class_column,
                self.column_count()
            )));
        }
        Ok(())
    }
}

/// One row as read from the file, before encoding.
#[derive(Debug, Clone, PartialEq)]
pub struct RawRow {
    pub id: Option<String>,
    /// Raw numeric value, or category index for categorical attributes.
    pub values: Vec<Option<f64>>,
    pub label: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RawDataset {
    pub schema: Schema,
    pub rows: Vec<RawRow>,
}

/// Reads a comma-separated data file described by `schema`.
pub fn load(path: &Path, schema: &Schema) -> Result<RawDataset> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse(&text, schema)
}

pub fn parse(text: &str, schema: &Schema) -> Result<RawDataset> {
    schema.validate()?;
    let columns = schema.column_count();
    let mut rows = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != columns {
            return Err(Error::MalformedInput(format!(
                "line {}: expected {columns} columns, found {}",
                lineno + 1,
                fields.len()
            )));
        }
        let at = |e: Error| match e {
            Error::MalformedInput(m) => Error::MalformedInput(format!("line {}: {m}", lineno + 1)),
            other => other,
        };
        let class_field = fields[schema.class_column];
        let label = schema
            .class_tokens
            .iter()
            .position(|c| c == class_field)
            .ok_or_else(|| Error::MalformedInput(format!("line {}: unknown class `{class_field}`", lineno + 1)))?;
        let id = schema.id_column.then(|| fields[0].to_string());
        let first = usize::from(schema.id_column);
        let values = fields
            .iter()
            .enumerate()
            .skip(first)
            .filter(|(i, _)| *i != schema.class_column)
            .zip(&schema.attributes)
            .map(|((_, f), a)| a.parse_raw(f, &schema.missing))
            .collect::<Result<Vec<_>>>()
            .map_err(at)?;
        rows.push(RawRow { id, values, label });
    }
    if rows.is_empty() {
        return Err(Error::MalformedInput("no examples".into()));
    }
    Ok(RawDataset {
        schema: schema.clone(),
        rows,
    })
}

impl RawDataset {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Renders the rows back into the file format they were read from.
    pub fn to_text(&self) -> String {
        let s = &self.schema;
        let mut out = String::new();
        for (r, row) in self.rows.iter().enumerate() {
            let mut fields: Vec<String> = Vec::with_capacity(s.column_count());
            if s.id_column {
                fields.push(row.id.clone().unwrap_or_else(|| (r + 1).to_string()));
            }
            for (v, a) in row.values.iter().zip(&s.attributes) {
                fields.push(match v {
                    Some(v) => a.render_raw(*v),
                    None => s.missing.clone(),
                });
            }
            fields.insert(s.class_column, s.class_tokens[row.label].clone());
            let _ = writeln!(out, "{}", fields.join(","));
        }
        out
    }

    /// Raw value used in place of a missing entry of attribute `attr`:
    /// the mean over `rows` (most frequent category for categoricals).
    pub fn imputation_value(&self, attr: usize, rows: Range<usize>) -> Result<f64> {
        let present = self.rows[rows].iter().filter_map(|r| r.values[attr]);
        let spec = &self.schema.attributes[attr];
        match spec.category_count() {
            Some(n) => {
                let mut counts = vec![0usize; n];
                for v in present {
                    counts[v as usize] += 1;
                }
                let best = counts
                    .iter()
                    .enumerate()
                    .fold((0, 0), |acc, (i, &c)| if c > acc.1 { (i, c) } else { acc });
                if best.1 == 0 {
                    return Err(Error::MalformedInput(format!(
                        "attribute `{}` has no observed values to impute from",
                        spec.name
                    )));
                }
                Ok(best.0 as f64)
            }
            None => {
                let (sum, count) = present.fold((0.0, 0usize), |(s, c), v| (s + v, c + 1));
                if count == 0 {
                    return Err(Error::MalformedInput(format!(
                        "attribute `{}` has no observed values to impute from",
                        spec.name
                    )));
                }
                Ok(sum / count as f64)
            }
        }
    }

    /// Encodes every feature into [0,1]. Missing entries are imputed from
    /// rows in `impute_from` (normally the training range).
    pub fn normalize(&self, impute_from: Range<usize>) -> Result<Dataset> {
        check_range(&impute_from, self.len())?;
        if impute_from.is_empty() {
            return Err(Error::RangeError {
                start: impute_from.start,
                end: impute_from.end,
                len: self.len(),
            });
        }
        let attrs = &self.schema.attributes;
        let mut fill: Vec<Option<f64>> = vec![None; attrs.len()];
        for (a, slot) in fill.iter_mut().enumerate() {
            if self.rows.iter().any(|r| r.values[a].is_none()) {
                *slot = Some(self.imputation_value(a, impute_from.clone())?);
            }
        }
        let degenerate: Vec<usize> = attrs
            .iter()
            .enumerate()
            .filter(|(_, a)| a.encode(0.0).is_none())
            .map(|(i, _)| i)
            .collect();

        let examples = self
            .rows
            .iter()
            .map(|row| {
                let missing: Vec<bool> = row.values.iter().map(Option::is_none).collect();
                let features = row
                    .values
                    .iter()
                    .zip(attrs)
                    .zip(&fill)
                    .map(|((v, a), f)| {
                        let raw = v.or(*f).expect("imputation value exists for missing attribute");
                        a.encode(raw).unwrap_or(0.0)
                    })
                    .collect();
                Example {
                    features,
                    label: row.label,
                    missing,
                }
            })
            .collect();

        Ok(Dataset {
            name: self.schema.name.clone(),
            attributes: attrs.clone(),
            classes: self.schema.class_names.clone(),
            examples,
            degenerate,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Example {
    pub features: Vec<f64>,
    pub label: usize,
    pub missing: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub name: String,
    pub attributes: Vec<AttributeSpec>,
    pub classes: Vec<String>,
    pub examples: Vec<Example>,
    /// Attributes whose declared range collapses to a point; encoded as 0.
    pub degenerate: Vec<usize>,
}

impl Dataset {
    /// Builds an already-encoded dataset, checking every invariant.
    pub fn new(
        name: &str,
        attributes: Vec<AttributeSpec>,
        classes: Vec<String>,
        examples: Vec<Example>,
    ) -> Result<Self> {
        for (i, ex) in examples.iter().enumerate() {
            if ex.features.len() != attributes.len() || ex.missing.len() != attributes.len() {
                return Err(Error::DimensionMismatch(format!(
                    "example {i} has {} features, expected {}",
                    ex.features.len(),
                    attributes.len()
                )));
            }
            if ex.label >= classes.len() {
                return Err(Error::MalformedInput(format!(
                    "example {i}: label {} out of range",
                    ex.label
                )));
            }
            if ex.features.iter().any(|f| !(0.0..=1.0).contains(f)) {
                return Err(Error::MalformedInput(format!("example {i}: feature outside [0,1]")));
            }
        }
        Ok(Dataset {
            name: name.to_string(),
            attributes,
            classes,
            examples,
            degenerate: Vec::new(),
        })
    }

    /// Convenience constructor for numeric data already in [0,1].
    pub fn from_rows(rows: &[(Vec<f64>, usize)], n_classes: usize) -> Result<Self> {
        let n_attr = rows.first().map_or(0, |r| r.0.len());
        let attributes = (1..=n_attr)
            .map(|i| AttributeSpec::continuous(&format!("x{i}"), 0.0, 1.0))
            .collect();
        let classes = (0..n_classes).map(|c| format!("c{c}")).collect();
        let examples = rows
            .iter()
            .map(|(f, l)| Example {
                features: f.clone(),
                label: *l,
                missing: vec![false; f.len()],
            })
            .collect();
        Dataset::new("synthetic", attributes, classes, examples)
    }

    pub fn len(&self) -> usize {
        self.examples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.examples.is_empty()
    }

    pub fn n_attributes(&self) -> usize {
        self.attributes.len()
    }

    pub fn n_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn view(&self, range: Range<usize>) -> Result<DataView<'_>> {
        check_range(&range, self.len())?;
        Ok(DataView { dataset: self, range })
    }

    pub fn all(&self) -> DataView<'_> {
        DataView {
            dataset: self,
            range: 0..self.len(),
        }
    }

    /// "Clump thickness (A_1)" style label for attribute `index`.
    pub fn attribute_label(&self, index: usize) -> String {
        format!("{} (A_{})", self.attributes[index].name, index + 1)
    }
}

fn check_range(range: &Range<usize>, len: usize) -> Result<()> {
    if range.start > range.end || range.end > len {
        return Err(Error::RangeError {
            start: range.start,
            end: range.end,
            len,
        });
    }
    Ok(())
}

/// A contiguous, file-ordered slice of a dataset.
#[derive(Debug, Clone)]
pub struct DataView<'a> {
    pub dataset: &'a Dataset,
    pub range: Range<usize>,
}

impl<'a> DataView<'a> {
    pub fn examples(&self) -> &'a [Example] {
        &self.dataset.examples[self.range.clone()]
    }

    pub fn len(&self) -> usize {
        self.range.len()
    }

    pub fn is_empty(&self) -> bool {
        self.range.is_empty()
    }

    pub fn n_attributes(&self) -> usize {
        self.dataset.n_attributes()
    }

    pub fn n_classes(&self) -> usize {
        self.dataset.n_classes()
    }

    pub fn labels(&self) -> Vec<usize> {
        self.examples().iter().map(|e| e.label).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitSpec {
    pub train: Range<usize>,
    pub test: Range<usize>,
}

impl SplitSpec {
    /// Parses `start..end`.
    pub fn parse_range(text: &str) -> Result<Range<usize>> {
        let (a, b) = text
            .split_once("..")
            .ok_or_else(|| Error::MalformedInput(format!("range `{text}`: expected `start..end`")))?;
        let parse = |s: &str| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| Error::MalformedInput(format!("range `{text}`: bad bound")))
        };
        Ok(parse(a)?..parse(b)?)
    }
}

pub fn split<'a>(d: &'a Dataset, s: &SplitSpec) -> Result<(DataView<'a>, DataView<'a>)> {
    Ok((d.view(s.train.clone())?, d.view(s.test.clone())?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cancer_like_schema() -> Schema {
        Schema {
            name: "t".into(),
            attributes: vec![
                AttributeSpec::ordinal("a", 1.0, 10.0),
                AttributeSpec::ordinal("b", 1.0, 10.0),
            ],
            class_tokens: vec!["2".into(), "4".into()],
            class_names: vec!["benign".into(), "malignant".into()],
            class_column: 3,
            id_column: true,
            missing: "?".into(),
        }
    }

    #[test]
    fn ordinal_min_max_encoding() {
        let raw = parse("1,6,1,2\n2,1,10,4\n", &cancer_like_schema()).unwrap();
        let d = raw.normalize(0..2).unwrap();
        assert!((d.examples[0].features[0] - (6.0 - 1.0) / 9.0).abs() < 1e-15);
        assert!((d.examples[0].features[0] - 0.5556).abs() < 1e-4);
        assert_eq!(d.examples[1].features[0], 0.0);
        assert_eq!(d.examples[1].features[1], 1.0);
        assert_eq!(d.examples[1].label, 1);
    }

    #[test]
    fn categorical_equal_spacing() {
        let a = AttributeSpec::categorical("age", &["young", "pre-presbyopic", "presbyopic"]);
        assert_eq!(a.encode(1.0), Some(0.5));
        assert_eq!(a.category_of(0.5), Some(1));
        assert_eq!(a.category_of(0.25), None);
    }

    #[test]
    fn missing_values_are_imputed_from_the_given_range_only() {
        let text = "1,2,1,2\n2,?,1,2\n3,4,1,4\n4,10,1,4\n";
        let raw = parse(text, &cancer_like_schema()).unwrap();
        assert!(raw.rows[1].values[0].is_none());
        // mean over non-missing rows 0..3 is (2 + 4) / 2 = 3; row 3 is outside the range
        let d = raw.normalize(0..3).unwrap();
        assert!(d.examples[1].missing[0]);
        assert!(!d.examples[0].missing[0]);
        assert!((d.examples[1].features[0] - (3.0 - 1.0) / 9.0).abs() < 1e-15);
    }

    #[test]
    fn degenerate_range_encodes_to_zero() {
        let mut schema = cancer_like_schema();
        schema.attributes[1] = AttributeSpec::ordinal("flat", 3.0, 3.0);
        let d = parse("1,5,3,2\n", &schema).unwrap().normalize(0..1).unwrap();
        assert_eq!(d.degenerate, vec![1]);
        assert_eq!(d.examples[0].features[1], 0.0);
    }

    #[test]
    fn malformed_rows_are_rejected() {
        let s = cancer_like_schema();
        assert!(matches!(parse("", &s), Err(Error::MalformedInput(_))));
        assert!(matches!(parse("1,2,3\n", &s), Err(Error::MalformedInput(_))));
        assert!(matches!(parse("1,2,3,9\n", &s), Err(Error::MalformedInput(_))));
        assert!(matches!(parse("1,11,3,2\n", &s), Err(Error::MalformedInput(_))));
        assert!(matches!(parse("1,x,3,2\n", &s), Err(Error::MalformedInput(_))));
    }

    #[test]
    fn splits_are_contiguous_and_checked() {
        let rows: Vec<(Vec<f64>, usize)> = (0..10).map(|i| (vec![i as f64 / 10.0], i % 2)).collect();
        let d = Dataset::from_rows(&rows, 2).unwrap();
        let (train, test) = split(
            &d,
            &SplitSpec {
                train: 0..6,
                test: 6..10,
            },
        )
        .unwrap();
        assert_eq!((train.len(), test.len()), (6, 4));
        assert_eq!(test.examples()[0].features[0], 0.6);
        let bad = split(
            &d,
            &SplitSpec {
                train: 0..6,
                test: 8..12,
            },
        );
        assert!(matches!(bad, Err(Error::RangeError { .. })));
    }

    #[test]
    fn schema_from_key_values() {
        let kv = KeyValues::parse(
            "name = lenses\nid_column = true\nclasses = 1, 2\nclass_names = hard, soft\n\
             attribute.1.name = Age\nattribute.1.kind = categorical\n\
             attribute.1.categories = 1, 2, 3\nattribute.1.labels = young, pre-presbyopic, presbyopic\n\
             attribute.2.kind = continuous\nattribute.2.range = 0, 5\n",
        )
        .unwrap();
        let s = Schema::from_kv(&kv).unwrap();
        assert_eq!(s.attributes.len(), 2);
        assert_eq!(s.class_column, 3);
        assert_eq!(s.attributes[0].category_label(1), Some("pre-presbyopic"));
        assert_eq!(s.attributes[1].name, "A_2");
    }
}

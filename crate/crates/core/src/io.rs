//! Text formats: model files, sample CSVs and partition files.
//!
//! Model files are TOML with keys `n_vars`, `alphabet_sizes` and `pmf`
//! (row-major, last variable fastest). Partition files hold one group per
//! line as comma-separated 1-based node numbers.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grouping::Partition;
use crate::source::JointSource;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    n_vars: usize,
    alphabet_sizes: Vec<usize>,
    pmf: Vec<f64>,
}

pub fn parse_model(text: &str) -> Result<JointSource> {
    let model: ModelFile = toml::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
    if model.n_vars != model.alphabet_sizes.len() {
        return Err(Error::Malformed(format!(
            "n_vars = {} but {} alphabet sizes given",
            model.n_vars,
            model.alphabet_sizes.len()
        )));
    }
    JointSource::new(model.alphabet_sizes, model.pmf)
}

/// Serializes a source; each line of `comment` becomes a leading `#` line.
/// Floats are written in shortest round-trip form, so parsing the output
/// gives back the identical table.
pub fn render_model(source: &JointSource, comment: Option<&str>) -> String {
    let model = ModelFile {
        n_vars: source.n_vars(),
        alphabet_sizes: source.alphabet_sizes().to_vec(),
        pmf: source.pmf().to_vec(),
    };
    let mut out = String::new();
    if let Some(comment) = comment {
        for line in comment.lines() {
            out.push_str("# ");
            out.push_str(line);
            out.push('\n');
        }
    }
    out.push_str(&toml::to_string(&model).expect("model serializes"));
    out
}

/// Rows of integer symbols. With `skip_header` the first line is dropped.
/// Row numbers in errors count data rows from 1.
pub fn parse_samples(text: &str, skip_header: bool) -> Result<Vec<Vec<usize>>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(skip_header)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for (r, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Malformed(e.to_string()))?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        let row = record
            .iter()
            .enumerate()
            .map(|(c, field)| {
                field.parse::<usize>().map_err(|_| {
                    Error::Malformed(format!(
                        "row {}, column {}: `{field}` is not a symbol",
                        r + 1,
                        c + 1
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    Ok(rows)
}

/// Comma-separated positive integers, e.g. `2,3,2`.
pub fn parse_list(text: &str) -> Result<Vec<usize>> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| Error::Malformed(format!("`{}` is not a non-negative integer", t.trim())))
        })
        .collect()
}

/// 1-based comma list to 0-based indices.
pub fn parse_one_based(text: &str) -> Result<Vec<usize>> {
    parse_list(text)?
        .into_iter()
        .map(|i| {
            i.checked_sub(1)
                .ok_or_else(|| Error::Malformed("node numbers start at 1".into()))
        })
        .collect()
}

pub fn parse_partition(text: &str, n: usize) -> Result<Partition> {
    let groups = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(parse_one_based)
        .collect::<Result<Vec<_>>>()?;
    Partition::new(groups, n)
}

/// One group per line, members ascending, 1-based.
pub fn render_partition(partition: &Partition) -> String {
    partition
        .groups()
        .iter()
        .map(|g| {
            let mut g = g.clone();
            g.sort_unstable();
            let names: Vec<String> = g.iter().map(|i| (i + 1).to_string()).collect();
            names.join(",") + "\n"
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn model_round_trip() {
        let s = JointSource::new(vec![2, 3], vec![0.1, 0.2, 0.05, 0.3, 0.15, 0.2]).unwrap();
        let text = render_model(&s, Some("note one\nnote two"));
        assert!(text.starts_with("# note one\n# note two\n"));
        assert_eq!(parse_model(&text).unwrap(), s);
    }

    #[test]
    fn model_errors() {
        let bad_sum = "n_vars = 2\nalphabet_sizes = [2, 2]\npmf = [0.5, 0.5, 0.5, 0.5]\n";
        assert!(matches!(parse_model(bad_sum), Err(Error::NotNormalized { .. })));
        let bad_n = "n_vars = 3\nalphabet_sizes = [2, 2]\npmf = [0.25, 0.25, 0.25, 0.25]\n";
        assert!(matches!(parse_model(bad_n), Err(Error::Malformed(_))));
        assert!(matches!(parse_model("pmf = ["), Err(Error::Malformed(_))));
        let extra = "n_vars = 1\nalphabet_sizes = [1]\npmf = [1.0]\nseed = 3\n";
        assert!(parse_model(extra).is_err());
    }

    #[test]
    fn samples() {
        assert_eq!(
            parse_samples("0,1\n1, 1\n\n", false).unwrap(),
            vec![vec![0, 1], vec![1, 1]]
        );
        assert_eq!(
            parse_samples("a,b\n0,1\n", true).unwrap(),
            vec![vec![0, 1]]
        );
        let err = parse_samples("0,1\n1,x\n", false).unwrap_err();
        assert_eq!(
            err,
            Error::Malformed("row 2, column 2: `x` is not a symbol".into())
        );
    }

    #[test]
    fn partitions() {
        let p = parse_partition("# groups\n1,3\n\n2\n", 3).unwrap();
        assert_eq!(p.groups(), &[vec![0, 2], vec![1]]);
        assert_eq!(render_partition(&p), "1,3\n2\n");
        assert!(parse_partition("1\n1,2\n", 2).is_err());
        assert!(parse_partition("0,1\n", 2).is_err());
        assert_eq!(parse_one_based("3, 1,2").unwrap(), vec![2, 0, 1]);
    }
}

//! Output formats. Every command yields a JSON document plus a flat list of
//! records; CSV and text are both drawn from the records.

use std::io::{self, Write};

use serde_json::{Map, Value};

use super::Format;

pub struct Rendered {
    /// The full JSON document.
    pub doc: Value,
    /// One object per CSV/text row.
    pub records: Vec<Map<String, Value>>,
    pub exit: i32,
}

impl Rendered {
    pub fn single(doc: Value, exit: i32) -> Self {
        let records = match &doc {
            Value::Object(m) => vec![m.clone()],
            _ => Vec::new(),
        };
        Rendered { doc, records, exit }
    }
}

/// Nested objects become dotted columns; arrays stay compact JSON.
fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten(&key, x, out);
            }
        }
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        Value::Null => out.push((prefix.to_string(), String::new())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

fn flat_records(records: &[Map<String, Value>]) -> (Vec<String>, Vec<Vec<(String, String)>>) {
    let mut header: Vec<String> = Vec::new();
    let rows: Vec<Vec<(String, String)>> = records
        .iter()
        .map(|r| {
            let mut cells = Vec::new();
            flatten("", &Value::Object(r.clone()), &mut cells);
            for (k, _) in &cells {
                if !header.contains(k) {
                    header.push(k.clone());
                }
            }
            cells
        })
        .collect();
    (header, rows)
}

pub fn write(out: &mut dyn Write, format: Format, r: &Rendered) -> io::Result<()> {
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, &r.doc)?;
            writeln!(out)
        }
        Format::Csv => {
            let (header, rows) = flat_records(&r.records);
            let mut w = csv::Writer::from_writer(out);
            w.write_record(&header)?;
            for row in rows {
                let cells = header.iter().map(|h| {
                    row.iter()
                        .find(|(k, _)| k == h)
                        .map_or("", |(_, v)| v.as_str())
                });
                w.write_record(cells)?;
            }
            w.flush()
        }
        Format::Text => {
            let (_, rows) = flat_records(&r.records);
            for row in rows {
                let line: Vec<String> = row.iter().map(|(k, v)| format!("{k}={v}")).collect();
                writeln!(out, "{}", line.join(" "))?;
            }
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn render(format: Format, r: &Rendered) -> String {
        let mut buf = Vec::new();
        write(&mut buf, format, r).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn csv_flattens_and_aligns() {
        let doc = json!([{"a": 1, "p": {"k": 2}}, {"a": 3, "b": [1, 2]}]);
        let records = doc
            .as_array()
            .unwrap()
            .iter()
            .map(|v| v.as_object().unwrap().clone())
            .collect();
        let r = Rendered {
            doc,
            records,
            exit: 0,
        };
        assert_eq!(render(Format::Csv, &r), "a,p.k,b\n1,2,\n3,,\"[1,2]\"\n");
        assert_eq!(render(Format::Text, &r), "a=1 p.k=2\na=3 b=[1,2]\n");
    }
}

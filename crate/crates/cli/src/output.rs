//! Table emission in the three stable formats. CSV uses a header row and
//! comma separation with counts as plain decimal integers; JSON mirrors
//! the rows as objects; pretty pads columns for reading.

use clap::ValueEnum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Pretty,
}

pub struct TableDoc {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
    notes: Vec<String>,
}

impl TableDoc {
    pub fn new(header: Vec<&'static str>) -> Self {
        TableDoc {
            header,
            rows: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    /// Free-form annotation, shown only in pretty output.
    pub fn note(&mut self, line: String) {
        self.notes.push(line);
    }

    pub fn emit(&self, format: Format) {
        match format {
            Format::Csv => {
                println!("{}", self.header.join(","));
                for row in &self.rows {
                    println!("{}", row.join(","));
                }
            }
            Format::Json => {
                let objects: Vec<serde_json::Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let map: serde_json::Map<String, serde_json::Value> = self
                            .header
                            .iter()
                            .zip(row)
                            .map(|(k, v)| (k.to_string(), serde_json::Value::String(v.clone())))
                            .collect();
                        serde_json::Value::Object(map)
                    })
                    .collect();
                println!(
                    "{}",
                    serde_json::to_string_pretty(&objects).expect("string table serializes")
                );
            }
            Format::Pretty => {
                let mut widths: Vec<usize> = self.header.iter().map(|h| h.len()).collect();
                for row in &self.rows {
                    for (i, cell) in row.iter().enumerate() {
                        widths[i] = widths[i].max(cell.len());
                    }
                }
                let line = |cells: Vec<String>| {
                    cells
                        .iter()
                        .zip(&widths)
                        .map(|(c, w)| format!("{c:>w$}"))
                        .collect::<Vec<_>>()
                        .join("  ")
                };
                println!("{}", line(self.header.iter().map(|h| h.to_string()).collect()));
                for row in &self.rows {
                    println!("{}", line(row.clone()));
                }
                for note in &self.notes {
                    println!("{note}");
                }
            }
        }
    }
}

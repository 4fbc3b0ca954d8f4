//! Static SVG line charts from the CSV tables: fixed 800×500 viewBox,
//! linear axes, one polyline per series, no interactivity.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 20.0;
const MARGIN_BOTTOM: f64 = 45.0;

const PALETTE: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

#[derive(Debug)]
pub enum PlotError {
    Io(String),
    Malformed(String),
}

struct Csv {
    header: Vec<String>,
    /// Cells parsed as numbers where possible; non-numeric cells (e.g. a
    /// predicate token column) only fail if a plotted column needs them.
    columns: Vec<Vec<Option<f64>>>,
}

impl Csv {
    fn numeric_column(&self, idx: usize) -> Result<Vec<f64>, PlotError> {
        self.columns[idx]
            .iter()
            .enumerate()
            .map(|(row, v)| {
                v.ok_or_else(|| {
                    PlotError::Malformed(format!(
                        "column {:?} row {} is not numeric",
                        self.header[idx],
                        row + 2
                    ))
                })
            })
            .collect()
    }
}

fn parse_csv(text: &str) -> Result<Csv, PlotError> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header: Vec<String> = lines
        .next()
        .ok_or_else(|| PlotError::Malformed("empty CSV".into()))?
        .split(',')
        .map(|s| s.trim().to_string())
        .collect();
    let mut columns = vec![Vec::new(); header.len()];
    for (lineno, line) in lines.enumerate() {
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != header.len() {
            return Err(PlotError::Malformed(format!(
                "row {} has {} cells, header has {}",
                lineno + 2,
                cells.len(),
                header.len()
            )));
        }
        for (i, cell) in cells.iter().enumerate() {
            columns[i].push(cell.trim().parse::<f64>().ok());
        }
    }
    Ok(Csv { header, columns })
}

/// Round tick step: 1, 2, or 5 times a power of ten covering the span.
fn nice_step(span: f64, target_ticks: f64) -> f64 {
    let raw = span / target_ticks;
    let mag = 10f64.powf(raw.log10().floor());
    for mult in [1.0, 2.0, 5.0, 10.0] {
        if mag * mult >= raw {
            return mag * mult;
        }
    }
    mag * 10.0
}

fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    if hi <= lo {
        return vec![lo];
    }
    let step = nice_step(hi - lo, 6.0);
    let mut t = (lo / step).ceil() * step;
    let mut out = Vec::new();
    while t <= hi + 1e-9 {
        out.push(t);
        t += step;
    }
    out
}

fn fmt_tick(v: f64) -> String {
    if v.abs() >= 1.0 || v == 0.0 {
        let i = v.round() as i64;
        if (v - i as f64).abs() < 1e-9 {
            return i.to_string();
        }
    }
    format!("{v}")
}

pub fn cmd_plot(
    input: &Path,
    output: &Path,
    series: &[String],
    x_column: Option<&str>,
) -> Result<(), PlotError> {
    if series.is_empty() {
        return Err(PlotError::Malformed("no series requested".into()));
    }
    let text = fs::read_to_string(input)
        .map_err(|e| PlotError::Io(format!("cannot read {}: {e}", input.display())))?;
    let csv = parse_csv(&text)?;
    if csv.columns.first().is_none_or(|c| c.is_empty()) {
        return Err(PlotError::Malformed("CSV has no data rows".into()));
    }

    let col_index = |name: &str| -> Result<usize, PlotError> {
        csv.header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| PlotError::Malformed(format!("no column named {name:?}")))
    };
    let x_idx = match x_column {
        Some(name) => col_index(name)?,
        None => 0,
    };
    let series_idx: Vec<usize> = series
        .iter()
        .map(|s| col_index(s))
        .collect::<Result<_, _>>()?;

    let xs = csv.numeric_column(x_idx)?;
    let series_data: Vec<Vec<f64>> = series_idx
        .iter()
        .map(|&i| csv.numeric_column(i))
        .collect::<Result<_, _>>()?;
    let x_lo = xs.iter().copied().fold(f64::INFINITY, f64::min);
    let x_hi = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut y_lo = 0.0f64;
    let mut y_hi = f64::NEG_INFINITY;
    for col in &series_data {
        for &v in col {
            y_lo = y_lo.min(v);
            y_hi = y_hi.max(v);
        }
    }
    if y_hi <= y_lo {
        y_hi = y_lo + 1.0;
    }
    let x_span = if x_hi > x_lo { x_hi - x_lo } else { 1.0 };

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let x_of = |v: f64| MARGIN_LEFT + (v - x_lo) / x_span * plot_w;
    let y_of = |v: f64| MARGIN_TOP + plot_h - (v - y_lo) / (y_hi - y_lo) * plot_h;

    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {WIDTH} {HEIGHT}\" \
         font-family=\"sans-serif\" font-size=\"12\">"
    );
    let _ = writeln!(s, "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>");

    // axes
    let x0 = MARGIN_LEFT;
    let y0 = MARGIN_TOP + plot_h;
    let _ = writeln!(
        s,
        "<line x1=\"{x0}\" y1=\"{y0}\" x2=\"{:.1}\" y2=\"{y0}\" stroke=\"black\"/>",
        MARGIN_LEFT + plot_w
    );
    let _ = writeln!(
        s,
        "<line x1=\"{x0}\" y1=\"{y0}\" x2=\"{x0}\" y2=\"{MARGIN_TOP}\" stroke=\"black\"/>"
    );
    for t in ticks(x_lo, x_hi) {
        let x = x_of(t);
        let _ = writeln!(
            s,
            "<line x1=\"{x:.1}\" y1=\"{y0}\" x2=\"{x:.1}\" y2=\"{:.1}\" stroke=\"black\"/>\
             <text x=\"{x:.1}\" y=\"{:.1}\" text-anchor=\"middle\">{}</text>",
            y0 + 5.0,
            y0 + 20.0,
            fmt_tick(t)
        );
    }
    for t in ticks(y_lo, y_hi) {
        let y = y_of(t);
        let _ = writeln!(
            s,
            "<line x1=\"{:.1}\" y1=\"{y:.1}\" x2=\"{x0}\" y2=\"{y:.1}\" stroke=\"black\"/>\
             <text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"end\">{}</text>",
            x0 - 5.0,
            x0 - 8.0,
            y + 4.0,
            fmt_tick(t)
        );
    }
    let _ = writeln!(
        s,
        "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\">{}</text>",
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 8.0,
        csv.header[x_idx]
    );

    for (si, data) in series_data.iter().enumerate() {
        let color = PALETTE[si % PALETTE.len()];
        let points: Vec<String> = xs
            .iter()
            .zip(data)
            .map(|(&x, &y)| format!("{:.1},{:.1}", x_of(x), y_of(y)))
            .collect();
        let _ = writeln!(
            s,
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>",
            points.join(" ")
        );
        for p in &points {
            let (px, py) = p.split_once(',').expect("formatted above");
            let _ = writeln!(s, "<circle cx=\"{px}\" cy=\"{py}\" r=\"2.5\" fill=\"{color}\"/>");
        }
        // legend entry
        let ly = MARGIN_TOP + 16.0 * si as f64 + 10.0;
        let _ = writeln!(
            s,
            "<rect x=\"{:.1}\" y=\"{:.1}\" width=\"12\" height=\"12\" fill=\"{color}\"/>\
             <text x=\"{:.1}\" y=\"{:.1}\">{}</text>",
            MARGIN_LEFT + 10.0,
            ly - 10.0,
            MARGIN_LEFT + 28.0,
            ly,
            csv.header[series_idx[si]]
        );
    }
    let _ = writeln!(s, "</svg>");

    fs::write(output, s)
        .map_err(|e| PlotError::Io(format!("cannot write {}: {e}", output.display())))
}

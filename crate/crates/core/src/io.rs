//! Reading and writing matrices, point clouds, profiles, dendrograms and
//! covering records.

use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::Path;

use crate::covering::{Covering, OverlapSample};
use crate::error::{Error, Result};
use crate::linkage::Dendrogram;
use crate::matrix::SquareMatrix;
use crate::network::{Network, PointCloud};
use crate::quasi::QuasiCovering;

/// First line of every covering record file.
pub const COVERINGS_HEADER: &str = "#cutcover coverings v1";

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

struct Row {
    line: usize,
    cells: Vec<String>,
}

fn read_rows(bytes: &[u8]) -> Result<Vec<Row>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(bytes);
    let mut rows = Vec::new();
    for rec in reader.byte_records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map(|p| p.line() as usize).unwrap_or(0);
            parse_err(line, 0, e.to_string())
        })?;
        let line = rec.position().map(|p| p.line() as usize).unwrap_or(0);
        let mut cells = Vec::with_capacity(rec.len());
        for (c, field) in rec.iter().enumerate() {
            let s = std::str::from_utf8(field)
                .map_err(|_| parse_err(line, c + 1, "cell is not valid UTF-8"))?;
            cells.push(s.to_string());
        }
        if cells.len() == 1 && cells[0].is_empty() {
            continue;
        }
        rows.push(Row { line, cells });
    }
    if rows.is_empty() {
        return Err(parse_err(1, 0, "no data rows"));
    }
    Ok(rows)
}

fn is_number(s: &str) -> bool {
    s.parse::<f64>().is_ok()
}

fn number(s: &str, line: usize, column: usize) -> Result<f64> {
    let v: f64 = s
        .parse()
        .map_err(|_| parse_err(line, column, format!("expected a number, found {s:?}")))?;
    if !v.is_finite() {
        return Err(parse_err(line, column, format!("{s} is not finite")));
    }
    Ok(v)
}

fn check_label(label: &str, line: usize, column: usize) -> Result<()> {
    if label.is_empty() {
        return Err(parse_err(line, column, "empty label"));
    }
    if label.contains(['\t', '\n', '\r']) {
        return Err(parse_err(line, column, "labels may not contain tabs or line breaks"));
    }
    Ok(())
}

fn check_unique(labels: &[String], line: usize) -> Result<()> {
    let mut sorted: Vec<&String> = labels.iter().collect();
    sorted.sort();
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        return Err(parse_err(line, 0, format!("duplicate label {:?}", w[0])));
    }
    Ok(())
}

/// Parses a dense dissimilarity matrix.
///
/// An optional header row of labels is recognised by an empty first cell or a
/// non-numeric cell past the first; an optional label column by a non-numeric
/// first cell in the first data row.
pub fn parse_matrix_csv(bytes: &[u8]) -> Result<Network> {
    let rows = read_rows(bytes)?;
    let first = &rows[0].cells;
    let has_header = first[0].is_empty()
        || first[1..].iter().any(|c| !is_number(c))
        || (first.len() == 1 && !is_number(&first[0]));
    let data = if has_header { &rows[1..] } else { &rows[..] };
    if data.is_empty() {
        return Err(parse_err(rows[0].line, 0, "header without data rows"));
    }
    let n = data.len();
    let has_label_col = !is_number(&data[0].cells[0]);
    let offset = usize::from(has_label_col);

    let mut header_labels = None;
    if has_header {
        let h = &rows[0];
        let cells = match h.cells.len() {
            k if k == n => &h.cells[..],
            k if k == n + 1 => &h.cells[1..],
            k => {
                return Err(parse_err(
                    h.line,
                    0,
                    format!("header has {k} cells for a {n}×{n} matrix"),
                ))
            }
        };
        for (c, l) in cells.iter().enumerate() {
            check_label(l, h.line, c + 1 + h.cells.len() - cells.len())?;
        }
        header_labels = Some(cells.to_vec());
    }

    let mut row_labels = Vec::new();
    let mut values = SquareMatrix::zeros(n);
    for (i, row) in data.iter().enumerate() {
        if row.cells.len() != n + offset {
            return Err(parse_err(
                row.line,
                0,
                format!("expected {} cells, found {}", n + offset, row.cells.len()),
            ));
        }
        if has_label_col {
            check_label(&row.cells[0], row.line, 1)?;
            row_labels.push(row.cells[0].clone());
        }
        for j in 0..n {
            let col = j + offset + 1;
            let v = number(&row.cells[j + offset], row.line, col)?;
            if v < 0.0 {
                return Err(parse_err(row.line, col, format!("negative entry {v}")));
            }
            if i == j && v != 0.0 {
                return Err(parse_err(row.line, col, format!("diagonal entry is {v}, expected 0")));
            }
            if i != j && v == 0.0 {
                return Err(parse_err(row.line, col, "off-diagonal entry is 0"));
            }
            values.set(i, j, v);
        }
    }

    let labels = match (header_labels, has_label_col) {
        (Some(h), true) if h != row_labels => {
            return Err(parse_err(rows[0].line, 0, "header labels disagree with row labels"))
        }
        (Some(h), _) => h,
        (None, true) => row_labels,
        (None, false) => crate::network::default_labels(n),
    };
    check_unique(&labels, rows[0].line)?;
    Network::new(labels, values)
}

/// Parses a point cloud: one point per row, an optional leading label column
/// and an optional header row (recognised by a non-numeric last cell).
pub fn parse_points_csv(bytes: &[u8]) -> Result<PointCloud> {
    let rows = read_rows(bytes)?;
    let has_header = rows[0].cells.last().is_some_and(|c| !is_number(c));
    let data = if has_header { &rows[1..] } else { &rows[..] };
    if data.is_empty() {
        return Err(parse_err(rows[0].line, 0, "header without data rows"));
    }
    let has_label_col = !is_number(&data[0].cells[0]);
    let offset = usize::from(has_label_col);
    let width = data[0].cells.len();
    if width <= offset {
        return Err(parse_err(data[0].line, 0, "row has no coordinates"));
    }
    let dim = width - offset;

    let mut labels = Vec::with_capacity(data.len());
    let mut coords = Vec::with_capacity(data.len() * dim);
    for (i, row) in data.iter().enumerate() {
        if row.cells.len() != width {
            return Err(parse_err(
                row.line,
                0,
                format!("expected {width} cells, found {}", row.cells.len()),
            ));
        }
        if has_label_col {
            check_label(&row.cells[0], row.line, 1)?;
            labels.push(row.cells[0].clone());
        } else {
            labels.push(format!("x{}", i + 1));
        }
        for c in offset..width {
            coords.push(number(&row.cells[c], row.line, c + 1)?);
        }
    }
    check_unique(&labels, data[0].line)?;

    let mut order: Vec<usize> = (0..data.len()).collect();
    let point = |i: usize| &coords[i * dim..(i + 1) * dim];
    order.sort_by(|&a, &b| {
        point(a)
            .iter()
            .zip(point(b))
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    for w in order.windows(2) {
        if point(w[0]) == point(w[1]) {
            let (a, b) = (w[0].min(w[1]), w[0].max(w[1]));
            return Err(parse_err(
                data[b].line,
                0,
                format!("duplicate point: same coordinates as line {}", data[a].line),
            ));
        }
    }
    PointCloud::new(labels, dim, coords)
}

fn read_file(path: &Path) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    std::fs::File::open(path)
        .and_then(|mut f| f.read_to_end(&mut buf))
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    Ok(buf)
}

pub fn load_matrix(path: &Path) -> Result<Network> {
    parse_matrix_csv(&read_file(path)?)
}

pub fn load_points(path: &Path) -> Result<PointCloud> {
    parse_points_csv(&read_file(path)?)
}

fn csv_writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().has_headers(false).from_writer(w)
}

fn csv_io(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

/// Labelled dense matrix: a header row with an empty corner cell, then one
/// row per node starting with its label.
pub fn write_matrix_csv<W: Write>(w: W, labels: &[String], m: &SquareMatrix) -> Result<()> {
    let mut out = csv_writer(w);
    let header = std::iter::once(String::new()).chain(labels.iter().cloned());
    out.write_record(header).map_err(csv_io)?;
    for (i, row) in m.rows().enumerate() {
        let cells = std::iter::once(labels[i].clone()).chain(row.iter().map(|v| v.to_string()));
        out.write_record(cells).map_err(csv_io)?;
    }
    out.flush()?;
    Ok(())
}

/// `label,c1,…,cd` header, then one labelled point per row.
pub fn write_points_csv<W: Write>(w: W, cloud: &PointCloud) -> Result<()> {
    let mut out = csv_writer(w);
    let header = std::iter::once("label".to_string()).chain((1..=cloud.dim()).map(|k| format!("c{k}")));
    out.write_record(header).map_err(csv_io)?;
    for i in 0..cloud.len() {
        let cells = std::iter::once(cloud.labels()[i].clone())
            .chain(cloud.point(i).iter().map(|v| v.to_string()));
        out.write_record(cells).map_err(csv_io)?;
    }
    out.flush()?;
    Ok(())
}

/// `delta,f_ol,m` header, then one row per breakpoint.
pub fn write_profile_csv<W: Write>(mut w: W, samples: &[OverlapSample]) -> Result<()> {
    let mut s = String::from("delta,f_ol,m\n");
    for p in samples {
        writeln!(s, "{},{},{}", p.delta, p.overlap, p.blocks).expect("writing to a String");
    }
    w.write_all(s.as_bytes())?;
    Ok(())
}

/// `id,left,right,height,size` header, then one merge per row.
pub fn write_dendrogram_csv<W: Write>(mut w: W, d: &Dendrogram) -> Result<()> {
    let mut s = String::from("id,left,right,height,size\n");
    for m in d.merges() {
        writeln!(s, "{},{},{},{},{}", m.id, m.left, m.right, m.height, m.size)
            .expect("writing to a String");
    }
    w.write_all(s.as_bytes())?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RecordMode {
    Symmetric,
    Quasi,
}

impl RecordMode {
    fn as_str(self) -> &'static str {
        match self {
            RecordMode::Symmetric => "symmetric",
            RecordMode::Quasi => "quasi",
        }
    }
}

/// Why a resolution was emitted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RecordTag {
    Requested,
    Partition,
    MinLocalMin,
}

impl RecordTag {
    fn as_str(self) -> &'static str {
        match self {
            RecordTag::Requested => "requested",
            RecordTag::Partition => "partition",
            RecordTag::MinLocalMin => "min-local-min",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        match s {
            "requested" => Some(RecordTag::Requested),
            "partition" => Some(RecordTag::Partition),
            "min-local-min" => Some(RecordTag::MinLocalMin),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoveringRecord {
    pub tag: RecordTag,
    pub covering: Covering,
    /// Present only in quasi mode.
    pub edges: Option<Vec<(usize, usize)>>,
}

impl CoveringRecord {
    pub fn symmetric(tag: RecordTag, covering: Covering) -> Self {
        CoveringRecord {
            tag,
            covering,
            edges: None,
        }
    }

    pub fn quasi(tag: RecordTag, q: &QuasiCovering) -> Self {
        CoveringRecord {
            tag,
            covering: q.covering().clone(),
            edges: Some(q.edges().to_vec()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoveringFile {
    pub mode: RecordMode,
    pub labels: Vec<String>,
    pub records: Vec<CoveringRecord>,
}

/// Renders the tab-separated covering record format.
pub fn format_coverings(file: &CoveringFile) -> Result<String> {
    for (c, l) in file.labels.iter().enumerate() {
        check_label(l, 0, c + 1)?;
    }
    let mut s = String::new();
    let mut line = |parts: &[&str]| {
        s.push_str(&parts.join("\t"));
        s.push('\n');
    };
    line(&[COVERINGS_HEADER]);
    line(&["mode", file.mode.as_str()]);
    let n = file.labels.len().to_string();
    line(&["nodes", &n]);
    let mut labels = vec!["labels"];
    labels.extend(file.labels.iter().map(String::as_str));
    line(&labels);
    for r in &file.records {
        let cov = &r.covering;
        if cov.n() != file.labels.len() {
            return Err(Error::Structural("record node count differs from label count".into()));
        }
        if (file.mode == RecordMode::Quasi) != r.edges.is_some() {
            return Err(Error::Structural("edges must be present exactly in quasi mode".into()));
        }
        line(&["record", r.tag.as_str()]);
        line(&["delta", &cov.delta().to_string()]);
        line(&["overlap", &cov.overlap_count().to_string()]);
        line(&["blocks", &cov.len().to_string()]);
        for b in cov.blocks() {
            let mut parts = vec!["block"];
            parts.extend(b.iter().map(|&x| file.labels[x].as_str()));
            line(&parts);
        }
        if let Some(edges) = &r.edges {
            line(&["edges", &edges.len().to_string()]);
            for &(i, j) in edges {
                line(&["edge", &i.to_string(), &j.to_string()]);
            }
        }
        line(&["end"]);
    }
    Ok(s)
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn next_fields(&mut self) -> Result<Vec<&'a str>> {
        let (k, l) = self
            .inner
            .next()
            .ok_or_else(|| parse_err(self.last + 1, 0, "unexpected end of input"))?;
        self.last = k + 1;
        Ok(l.split('\t').collect())
    }

    fn expect(&mut self, key: &str, arity: Option<usize>) -> Result<Vec<&'a str>> {
        let f = self.next_fields()?;
        if f[0] != key {
            return Err(parse_err(self.last, 1, format!("expected {key:?}, found {:?}", f[0])));
        }
        if let Some(a) = arity {
            if f.len() != a + 1 {
                return Err(parse_err(
                    self.last,
                    0,
                    format!("{key:?} takes {a} field(s), found {}", f.len() - 1),
                ));
            }
        }
        Ok(f[1..].to_vec())
    }

    fn count(&mut self, key: &str) -> Result<usize> {
        let f = self.expect(key, Some(1))?;
        f[0].parse()
            .map_err(|_| parse_err(self.last, 2, format!("invalid count {:?}", f[0])))
    }
}

/// Parses the covering record format and re-validates every record.
pub fn parse_coverings(text: &str) -> Result<CoveringFile> {
    let mut lines = Lines {
        inner: text.lines().enumerate(),
        last: 0,
    };
    let head = lines.next_fields()?;
    if head != [COVERINGS_HEADER] {
        return Err(parse_err(1, 1, "missing or unsupported header"));
    }
    let mode = match lines.expect("mode", Some(1))?[0] {
        "symmetric" => RecordMode::Symmetric,
        "quasi" => RecordMode::Quasi,
        other => return Err(parse_err(lines.last, 2, format!("unknown mode {other:?}"))),
    };
    let n = lines.count("nodes")?;
    let labels: Vec<String> = lines
        .expect("labels", Some(n))?
        .into_iter()
        .map(String::from)
        .collect();
    for (c, l) in labels.iter().enumerate() {
        check_label(l, lines.last, c + 2)?;
    }
    check_unique(&labels, lines.last)?;
    let mut index: Vec<(&str, usize)> = labels.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
    index.sort_unstable();

    let mut records = Vec::new();
    loop {
        let Some((k, l)) = lines.inner.next() else { break };
        lines.last = k + 1;
        let f: Vec<&str> = l.split('\t').collect();
        if f.len() != 2 || f[0] != "record" {
            return Err(parse_err(lines.last, 1, "expected a record line"));
        }
        let tag = RecordTag::parse(f[1])
            .ok_or_else(|| parse_err(lines.last, 2, format!("unknown record tag {:?}", f[1])))?;
        let d = lines.expect("delta", Some(1))?[0];
        let delta: f64 = d
            .parse()
            .ok()
            .filter(|v: &f64| v.is_finite() && *v >= 0.0)
            .ok_or_else(|| parse_err(lines.last, 2, format!("invalid resolution {d:?}")))?;
        let overlap = lines.count("overlap")?;
        let m = lines.count("blocks")?;
        if m > n.max(1) {
            return Err(parse_err(lines.last, 2, "more blocks than nodes"));
        }
        let mut blocks = Vec::with_capacity(m);
        for _ in 0..m {
            let members = lines.expect("block", None)?;
            let mut b = Vec::with_capacity(members.len());
            for (c, name) in members.iter().enumerate() {
                let pos = index
                    .binary_search_by(|(l, _)| l.cmp(name))
                    .map_err(|_| parse_err(lines.last, c + 2, format!("unknown label {name:?}")))?;
                b.push(index[pos].1);
            }
            blocks.push(b);
        }
        let line = lines.last;
        let covering = Covering::new(n, delta, blocks)
            .map_err(|e| parse_err(line, 0, e.to_string()))?;
        if covering.len() != m {
            return Err(parse_err(line, 0, "duplicate blocks"));
        }
        if covering.overlap_count() != overlap {
            return Err(parse_err(
                line,
                0,
                format!("overlap is {} but the record says {overlap}", covering.overlap_count()),
            ));
        }
        let edges = if mode == RecordMode::Quasi {
            let e = lines.count("edges")?;
            if e > m * m {
                return Err(parse_err(lines.last, 2, "more edges than block pairs"));
            }
            let mut edges = Vec::with_capacity(e);
            for _ in 0..e {
                let f = lines.expect("edge", Some(2))?;
                let mut ends = [0usize; 2];
                for (c, s) in f.iter().enumerate() {
                    ends[c] = s
                        .parse()
                        .map_err(|_| parse_err(lines.last, c + 2, format!("invalid block index {s:?}")))?;
                }
                edges.push((ends[0], ends[1]));
            }
            let q = QuasiCovering::new(covering.clone(), edges.clone())
                .map_err(|e| parse_err(lines.last, 0, e.to_string()))?;
            if q.edges() != edges.as_slice() {
                return Err(parse_err(lines.last, 0, "edges must be sorted and distinct"));
            }
            Some(edges)
        } else {
            None
        };
        lines.expect("end", Some(0))?;
        records.push(CoveringRecord {
            tag,
            covering,
            edges,
        });
    }
    Ok(CoveringFile {
        mode,
        labels,
        records,
    })
}

//! Sub-class map of the `c1 >= 0` hemisphere and tabular exports.
//!
//! Pixel `(i, j)` of a grid with resolution `n` sits at
//! `u = (j - n/2) * 2/n`, `v = (n/2 - i) * 2/n`, so row 0 is the top edge and
//! the centre pixel `(n/2, n/2)` is the pole `|1>`.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path as FsPath, PathBuf};
use std::str::FromStr;
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::Deserialize;

use crate::classify::{sign_pattern, ClassLabel, SubclassTable, DEFAULT_TOL, SUBCLASS_CORNERS};
use crate::error::{Error, Result};
use crate::hilbert::{circle_frame, hemisphere_project, RayState, SpherePoint};
use crate::interferometer::{probabilities, Path, PathSystem};
use crate::kd::{inequality_sum, kd_profile, violation, KD_PAIRS};
use crate::states::{joint_basis, named_states, t_2f_example, NamedState};

pub const MIN_RESOLUTION: usize = 16;
pub const CIRCLE_SAMPLES: usize = 720;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cell {
    Outside,
    /// At least one KD value is zero within tolerance.
    Boundary,
    Region(ClassLabel),
}

#[derive(Clone, Debug)]
pub struct AtlasGrid {
    resolution: usize,
    cells: Vec<Cell>,
}

impl AtlasGrid {
    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn cell(&self, i: usize, j: usize) -> Cell {
        self.cells[i * self.resolution + j]
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn point(&self, i: usize, j: usize) -> SpherePoint {
        let h = self.resolution as f64 / 2.0;
        SpherePoint::new((j as f64 - h) / h, (h - i as f64) / h)
    }

    /// Pixel nearest to `p`, if it lies on the grid.
    pub fn pixel_of(&self, p: SpherePoint) -> Option<(usize, usize)> {
        let h = self.resolution as f64 / 2.0;
        let j = (p.u * h + h).round();
        let i = (h - p.v * h).round();
        let n = self.resolution as f64;
        (i >= 0.0 && j >= 0.0 && i < n && j < n).then_some((i as usize, j as usize))
    }

    pub fn label_counts(&self) -> BTreeMap<ClassLabel, usize> {
        let mut out = BTreeMap::new();
        for c in &self.cells {
            if let Cell::Region(l) = c {
                *out.entry(*l).or_insert(0) += 1;
            }
        }
        out
    }
}

pub fn sample_atlas(resolution: usize, tol: f64) -> Result<AtlasGrid> {
    if resolution < MIN_RESOLUTION {
        return Err(Error::Config(format!(
            "atlas resolution {resolution} is below the minimum of {MIN_RESOLUTION}"
        )));
    }
    let table = SubclassTable::standard();
    let shell = AtlasGrid {
        resolution,
        cells: Vec::new(),
    };
    let rows: Vec<Vec<Cell>> = (0..resolution)
        .into_par_iter()
        .map(|i| {
            (0..resolution)
                .map(|j| {
                    let Some(ray) = shell.point(i, j).lift() else {
                        return Ok(Cell::Outside);
                    };
                    let pattern = sign_pattern(&kd_profile(&ray, table.system()), tol);
                    if !pattern.is_strict() {
                        return Ok(Cell::Boundary);
                    }
                    table
                        .lookup(&pattern)
                        .map(Cell::Region)
                        .ok_or_else(|| Error::UnknownPattern(pattern.to_string()))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    Ok(AtlasGrid {
        resolution,
        cells: rows.into_iter().flatten().collect(),
    })
}

/// Fill color per sub-class.
#[derive(Clone, Debug)]
pub struct Palette {
    colors: HashMap<ClassLabel, [u8; 3]>,
}

#[derive(Deserialize)]
struct PaletteFile {
    colors: BTreeMap<String, String>,
}

fn parse_hex(s: &str) -> Option<[u8; 3]> {
    let h = s.strip_prefix('#')?;
    if h.len() != 6 {
        return None;
    }
    let byte = |k: usize| u8::from_str_radix(&h[k..k + 2], 16).ok();
    Some([byte(0)?, byte(2)?, byte(4)?])
}

impl Palette {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let file: PaletteFile = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        let mut colors = HashMap::new();
        for (key, hex) in &file.colors {
            let label: ClassLabel = key
                .parse()
                .map_err(|_| Error::Config(format!("palette entry `{key}` is not a sub-class")))?;
            let rgb = parse_hex(hex).ok_or_else(|| Error::Config(format!("bad color `{hex}` for {key}")))?;
            colors.insert(label, rgb);
        }
        if let Some((missing, _)) = SUBCLASS_CORNERS.iter().find(|(l, _)| !colors.contains_key(l)) {
            return Err(Error::Config(format!("palette has no color for {missing}")));
        }
        Ok(Palette { colors })
    }

    pub fn standard() -> &'static Palette {
        static PALETTE: OnceLock<Palette> = OnceLock::new();
        PALETTE.get_or_init(|| {
            Palette::from_toml_str(include_str!("../assets/palette.toml")).expect("bundled palette is valid")
        })
    }

    pub fn color(&self, label: ClassLabel) -> [u8; 3] {
        self.colors[&label]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    /// Binary portable pixmap (P6).
    Raster,
    /// Standalone SVG document.
    Vector,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Raster => "ppm",
            Format::Vector => "svg",
        }
    }
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "raster" | "ppm" => Ok(Format::Raster),
            "vector" | "svg" => Ok(Format::Vector),
            _ => Err(Error::UnsupportedFormat(s.to_string())),
        }
    }
}

pub fn render(grid: &AtlasGrid, format: Format) -> Vec<u8> {
    match format {
        Format::Raster => render_raster(grid, Palette::standard()),
        Format::Vector => render_vector(grid.resolution, &PathSystem::standard()),
    }
}

pub fn render_raster(grid: &AtlasGrid, palette: &Palette) -> Vec<u8> {
    let n = grid.resolution;
    let mut out = format!("P6\n{n} {n}\n255\n").into_bytes();
    out.reserve(3 * n * n);
    for c in &grid.cells {
        let rgb = match c {
            Cell::Outside => [255, 255, 255],
            Cell::Boundary => [0, 0, 0],
            Cell::Region(l) => palette.color(*l),
        };
        out.extend_from_slice(&rgb);
    }
    out
}

/// Points of the zero-probability circle of `axis`, projected to `(u, v)`.
pub fn circle_polyline(axis: &RayState, samples: usize) -> Vec<SpherePoint> {
    let (e1, e2) = circle_frame(axis);
    (0..samples)
        .map(|k| {
            let t = std::f64::consts::PI * k as f64 / (samples - 1) as f64;
            let (c, s) = (t.cos(), t.sin());
            SpherePoint::new(c * e1[1] + s * e2[1], c * e1[2] + s * e2[2])
        })
        .collect()
}

pub fn render_vector(size: usize, system: &PathSystem) -> Vec<u8> {
    let size = size.max(MIN_RESOLUTION) as f64;
    let r = size * 0.45;
    let c = size / 2.0;
    let xy = |p: SpherePoint| (c + r * p.u, c - r * p.v);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(s, r##"<circle cx="{c}" cy="{c}" r="{r}" fill="none" stroke="#999999"/>"##);
    for p in Path::ALL {
        let pts: Vec<String> = circle_polyline(&system.ray(p), CIRCLE_SAMPLES)
            .into_iter()
            .map(|q| {
                let (x, y) = xy(q);
                format!("{x:.3},{y:.3}")
            })
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline data-path="{p}" fill="none" stroke="black" stroke-width="1" points="{}"/>"#,
            pts.join(" ")
        );
    }
    for st in named_states(system).expect("default system has all named states") {
        let (x, y) = xy(hemisphere_project(&st.ray));
        let _ = writeln!(s, r#"<circle class="state" cx="{x:.3}" cy="{y:.3}" r="3" fill="black"/>"#);
        let _ = writeln!(
            s,
            r#"<text x="{:.3}" y="{:.3}" font-family="sans-serif" font-size="12">{}</text>"#,
            x + 4.0,
            y - 4.0,
            st.name
        );
    }
    s.push_str("</svg>\n");
    s.into_bytes()
}

/// CSV documents: path probabilities, KD values, inequality sums and labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalTables {
    pub probabilities: String,
    pub kd_values: String,
    pub inequality: String,
    pub labels: String,
}

impl CanonicalTables {
    pub fn files(&self) -> [(&'static str, &str); 4] {
        [
            ("probabilities.csv", &self.probabilities),
            ("kd_values.csv", &self.kd_values),
            ("inequality.csv", &self.inequality),
            ("labels.csv", &self.labels),
        ]
    }

    pub fn write_to(&self, dir: &FsPath) -> Result<Vec<PathBuf>> {
        fs::create_dir_all(dir)?;
        self.files()
            .into_iter()
            .map(|(name, body)| {
                let path = dir.join(name);
                fs::write(&path, body)?;
                Ok(path)
            })
            .collect()
    }
}

/// Named states, joint basis and the `T(2,f)` example.
pub fn canonical_states(system: &PathSystem) -> Result<Vec<NamedState>> {
    let mut out = named_states(system)?;
    out.extend(joint_basis(system)?);
    out.push(t_2f_example());
    Ok(out)
}

fn csv_doc<F>(header: Vec<String>, rows: &[NamedState], mut row: F) -> Result<String>
where
    F: FnMut(&NamedState) -> Result<Vec<String>>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&header)?;
    for st in rows {
        let c = st.ray.coeffs();
        let mut rec = vec![st.name.clone(), c[0].to_string(), c[1].to_string(), c[2].to_string()];
        rec.extend(row(st)?);
        w.write_record(&rec)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn header(extra: impl IntoIterator<Item = String>) -> Vec<String> {
    ["state", "c1", "c2", "c3"].map(String::from).into_iter().chain(extra).collect()
}

pub fn export_canonical_tables() -> Result<CanonicalTables> {
    let table = SubclassTable::standard();
    let system = table.system();
    let states = canonical_states(system)?;

    let probabilities = csv_doc(header(Path::ALL.map(|p| format!("P({p})"))), &states, |st| {
        Ok(probabilities(&st.ray, system).iter().map(|(_, v)| v.to_string()).collect())
    })?;
    let kd_values = csv_doc(header(KD_PAIRS.map(|k| k.label())), &states, |st| {
        Ok(kd_profile(&st.ray, system).values.iter().map(f64::to_string).collect())
    })?;
    let inequality = csv_doc(header(["sum".to_string(), "violation".to_string()]), &states, |st| {
        let s = inequality_sum(&st.ray, system);
        Ok(vec![s.to_string(), violation(s).to_string()])
    })?;
    let labels = csv_doc(header(["pattern".to_string(), "labels".to_string()]), &states, |st| {
        let r = table.classify(&st.ray, DEFAULT_TOL)?;
        let names: Vec<String> = r.labels.iter().map(ToString::to_string).collect();
        Ok(vec![r.pattern.to_string(), names.join(";")])
    })?;
    Ok(CanonicalTables {
        probabilities,
        kd_values,
        inequality,
        labels,
    })
}

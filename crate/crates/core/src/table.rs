//! The four reference tables: displacement times for the sphere and the disc,
//! and the oscillator temperature and pressure grids. Each cell holds the
//! computed value next to the printed one.

use std::fmt::Write as _;

use serde::Serialize;

use crate::diffusion::{DiffusionLaw, ObjectKind, QbdRates};
use crate::error::{Error, Result};
use crate::models::{effective_lambda_dp, effective_lambda_karolyhazy, CollapseModel, FormFactors, KarolyhazyParams};
use crate::oscillator::{required_pressure, required_temperature, EtaLaw, OscillatorSpec};
use crate::tolerances::{within_factor, within_relative, LOOSE, OSCILLATOR_FACTOR};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TableId {
    I,
    II,
    III,
    IV,
}

impl TableId {
    pub const ALL: [TableId; 4] = [Self::I, Self::II, Self::III, Self::IV];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::I => "I",
            Self::II => "II",
            Self::III => "III",
            Self::IV => "IV",
        }
    }
}

impl std::str::FromStr for TableId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "I" | "1" => Ok(Self::I),
            "II" | "2" => Ok(Self::II),
            "III" | "3" => Ok(Self::III),
            "IV" | "4" => Ok(Self::IV),
            other => Err(Error::Config(format!("unknown table '{other}' (I|II|III|IV)"))),
        }
    }
}

/// How computed cells are compared with printed ones.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Tolerance {
    Relative(f64),
    Factor(f64),
}

impl Tolerance {
    pub fn accepts(self, computed: f64, printed: f64) -> bool {
        match self {
            Self::Relative(t) => within_relative(computed, printed, t),
            Self::Factor(k) => within_factor(computed, printed, k),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Cell {
    pub computed: f64,
    pub printed: f64,
    /// Known anomaly in the printed value, if any.
    pub note: Option<&'static str>,
    pub within_tolerance: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub key: f64,
    pub cells: Vec<Cell>,
    /// Extra computed-only columns.
    pub provenance: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub id: TableId,
    pub title: &'static str,
    pub row_key: &'static str,
    pub columns: Vec<&'static str>,
    pub provenance_columns: Vec<&'static str>,
    pub tolerance: Tolerance,
    pub rows: Vec<Row>,
}

impl Table {
    pub fn cells(&self) -> impl Iterator<Item = (&Row, &'static str, &Cell)> {
        self.rows.iter().flat_map(move |r| self.columns.iter().zip(&r.cells).map(move |(c, cell)| (r, *c, cell)))
    }

    /// Cells outside tolerance that carry no known-anomaly note.
    pub fn unexplained_mismatches(&self) -> Vec<(f64, &'static str)> {
        self.cells()
            .filter(|(_, _, c)| !c.within_tolerance && c.note.is_none())
            .map(|(r, col, _)| (r.key, col))
            .collect()
    }

    /// CSV body: a header, then for each row a `computed` line followed by a
    /// `paper_printed` line.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let header: Vec<&str> = std::iter::once(self.row_key)
            .chain(self.columns.iter().copied())
            .chain(self.provenance_columns.iter().copied())
            .chain(["source", "flags"])
            .collect();
        out.push_str(&header.join(","));
        out.push('\n');
        for row in &self.rows {
            let flags: Vec<String> = self
                .columns
                .iter()
                .zip(&row.cells)
                .filter_map(|(col, c)| match (c.note, c.within_tolerance) {
                    (Some(note), _) => Some(format!("{col}:{note}")),
                    (None, false) => Some(format!("{col}:outside_tolerance")),
                    (None, true) => None,
                })
                .collect();
            let _ = write!(out, "{}", fmt_sci(row.key));
            for c in &row.cells {
                let _ = write!(out, ",{}", fmt_sci(c.computed));
            }
            for p in &row.provenance {
                let _ = write!(out, ",{}", fmt_sci(*p));
            }
            let _ = writeln!(out, ",computed,{}", flags.join(";"));
            let _ = write!(out, "{}", fmt_sci(row.key));
            for c in &row.cells {
                let _ = write!(out, ",{}", fmt_sci(c.printed));
            }
            out.push_str(&",".repeat(self.provenance_columns.len()));
            out.push_str(",paper_printed,\n");
        }
        out
    }
}

/// C-style `%.6e`: six decimals and a signed, at least two-digit exponent.
pub fn fmt_sci(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    let s = format!("{x:.6e}");
    let (mantissa, exp) = s.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}e{sign}{:02}", exp.abs())
}

const SPHERE_PRINTED: [[f64; 5]; 4] = [
    [13.0, 0.03, 6.3e3, 3e3, 17e2],
    [63.0, 0.13, 3e4, 1.4e4, 17e3],
    [292.0, 0.6, 1.4e5, 6.3e4, 17e4],
    [135.0, 3.0, 6.3e5, 3e5, 17e5],
];

const DISC_PRINTED: [[f64; 5]; 3] =
    [[4.5e-2, 1e-4, 21.0, 10.0, 0.1], [0.2, 5e-4, 97.0, 45.0, 1.0], [1.0, 2e-3, 452.0, 210.0, 10.0]];

const OSC_TEMPERATURE_PRINTED: [[f64; 3]; 4] =
    [[1.6e-9, 6.5e-7, 4.1e-4], [1.2e-9, 5.7e-7, 3.8e-4], [9.6e-10, 5.1e-7, 3.5e-4], [8e-10, 4.7e-7, 3.3e-4]];

const OSC_PRESSURE_PRINTED: [[f64; 3]; 4] =
    [[3e-4, 0.0063, 0.1576], [2.69e-4, 0.0059, 0.1515], [2.42e-4, 0.0056, 0.1461], [2.21e-4, 0.0053, 0.1412]];

const OSC_MASSES_AMU: [f64; 4] = [1e6, 1e8, 1e10, 1e12];
const OSC_OMEGAS: [f64; 3] = [1e3, 1e6, 1e9];

/// The 1e-2 cm GRW sphere cell is printed as 135; the law gives ~1.35e3.
const TYPO_NOTE: &str = "printed_value_likely_1.35e3";

fn displacement_table(kind: ObjectKind) -> Result<Table> {
    let ff = FormFactors::default();
    let law = |m: &CollapseModel| match kind {
        ObjectKind::Sphere => DiffusionLaw::csl_sphere(m, ff.f_trans),
        ObjectKind::Disc => DiffusionLaw::csl_disc(m, ff.f_rot),
    };
    let k_live =
        CollapseModel::karolyhazy().with_lambda(effective_lambda_karolyhazy(&KarolyhazyParams::reference()))?;
    let dp_live = CollapseModel::diosi_penrose().with_lambda(effective_lambda_dp(crate::models::DEFAULT_RC)?)?;
    let laws = [
        law(&CollapseModel::grw()),
        law(&CollapseModel::adler()),
        law(&CollapseModel::karolyhazy()),
        law(&CollapseModel::diosi_penrose()),
        DiffusionLaw::qbd(kind, &QbdRates::default()),
    ];
    let live = [law(&k_live), law(&dp_live)];
    let (keys, printed, id, title, row_key): (&[f64], Vec<&[f64; 5]>, _, _, _) = match kind {
        ObjectKind::Sphere => (
            &[1e-5, 1e-4, 1e-3, 1e-2],
            SPHERE_PRINTED.iter().collect(),
            TableId::I,
            "Displacement time (s) of a sphere with R = a",
            "delta_x_cm",
        ),
        ObjectKind::Disc => (
            &[1e-4, 1e-3, 1e-2],
            DISC_PRINTED.iter().collect(),
            TableId::II,
            "Rotation time (s) of the anchor disc",
            "delta_theta_rad",
        ),
    };
    let tolerance = Tolerance::Relative(LOOSE);
    let rows = keys
        .iter()
        .zip(printed)
        .map(|(&key, printed)| {
            let cells = laws
                .iter()
                .zip(printed)
                .enumerate()
                .map(|(j, (l, &p))| {
                    let computed = l.time_to_reach(key)?;
                    let note = (id == TableId::I && key == 1e-2 && j == 0).then_some(TYPO_NOTE);
                    Ok(Cell { computed, printed: p, note, within_tolerance: tolerance.accepts(computed, p) })
                })
                .collect::<Result<Vec<_>>>()?;
            let provenance = live.iter().map(|l| l.time_to_reach(key)).collect::<Result<Vec<_>>>()?;
            Ok(Row { key, cells, provenance })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Table {
        id,
        title,
        row_key,
        columns: vec!["t_grw_s", "t_adler_s", "t_karolyhazy_s", "t_dp_s", "t_qbd_s"],
        provenance_columns: vec!["t_karolyhazy_live_lambda_s", "t_dp_live_lambda_s"],
        tolerance,
        rows,
    })
}

fn oscillator_table(id: TableId) -> Result<Table> {
    let (eps, chi, t_obs) = (0.1, 0.1, 1.0);
    let tolerance = Tolerance::Factor(OSCILLATOR_FACTOR);
    let printed = if id == TableId::III { &OSC_TEMPERATURE_PRINTED } else { &OSC_PRESSURE_PRINTED };
    let rows = OSC_MASSES_AMU
        .iter()
        .zip(printed)
        .map(|(&mass, printed)| {
            let mut eta = 0.0;
            let cells = OSC_OMEGAS
                .iter()
                .zip(printed)
                .map(|(&omega, &p)| {
                    let spec = OscillatorSpec::from_mass_amu(mass, omega)?;
                    eta = EtaLaw::Csl.eta(&spec, crate::models::LAMBDA_GRW)?;
                    let t = required_temperature(&spec, eta, eps, t_obs)?;
                    let computed = match id {
                        TableId::III => t,
                        _ => required_pressure(&spec, eta, eps, chi, t, t_obs)?,
                    };
                    Ok(Cell { computed, printed: p, note: None, within_tolerance: tolerance.accepts(computed, p) })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Row { key: mass, cells, provenance: vec![eta] })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Table {
        id,
        title: if id == TableId::III {
            "Required oscillator temperature (K)"
        } else {
            "Required ambient pressure (pT) for the oscillator"
        },
        row_key: "mass_amu",
        columns: vec!["omega_1e3_rad_s", "omega_1e6_rad_s", "omega_1e9_rad_s"],
        provenance_columns: vec!["eta_cm2_s"],
        tolerance,
        rows,
    })
}

pub fn generate_table(id: TableId) -> Result<Table> {
    match id {
        TableId::I => displacement_table(ObjectKind::Sphere),
        TableId::II => displacement_table(ObjectKind::Disc),
        TableId::III | TableId::IV => oscillator_table(id),
    }
}

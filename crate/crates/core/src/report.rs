//! Byte-stable report serialisation.
//!
//! CSV uses the fixed header `N,ell,delta,L,heart,g,count,rhs,ratio,flag`,
//! floats are always rendered as `%.12e` (two-digit signed exponent), lines
//! end in LF, and JSON field order is fixed, so identical reports serialise
//! to identical bytes.

#[derive(Debug, Clone, PartialEq)]
pub struct CountRow {
    pub n_level: u32,
    pub ell: u32,
    pub delta: f64,
    pub l: f64,
    pub heart: Option<f64>,
    pub g_desc: String,
    pub count: u64,
    pub rhs: f64,
    pub ratio: f64,
    pub flag: bool,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ReportMeta {
    pub tool: String,
    pub config_hash: String,
    pub timestamp: String,
    pub runtime_ms: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CountReport {
    pub rows: Vec<CountRow>,
    pub meta: ReportMeta,
}

pub const CSV_HEADER: &str = "N,ell,delta,L,heart,g,count,rhs,ratio,flag";

/// `%.12e` with a sign and at least two exponent digits, C style.
pub fn fmt_e12(x: f64) -> String {
    assert!(x.is_finite(), "report floats must be finite, got {x}");
    let x = if x == 0.0 { 0.0 } else { x }; // normalise -0.0
    let s = format!("{:.12e}", x);
    let (mant, exp) = s.split_once('e').expect("exponential format");
    let (sign, digits) = match exp.strip_prefix('-') {
        Some(d) => ('-', d),
        None => ('+', exp),
    };
    format!("{mant}e{sign}{digits:0>2}")
}

fn json_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out
}

impl CountReport {
    pub fn new(rows: Vec<CountRow>, meta: ReportMeta) -> Self {
        Self { rows, meta }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let heart = r.heart.map(fmt_e12).unwrap_or_default();
            debug_assert!(!r.g_desc.contains(','), "g descriptor must be comma-free");
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{}\n",
                r.n_level,
                r.ell,
                fmt_e12(r.delta),
                fmt_e12(r.l),
                heart,
                r.g_desc,
                r.count,
                fmt_e12(r.rhs),
                fmt_e12(r.ratio),
                u8::from(r.flag),
            ));
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut out = String::new();
        out.push_str("{\n  \"meta\": {");
        out.push_str(&format!(
            "\"tool\": \"{}\", \"config_hash\": \"{}\", \"timestamp\": \"{}\", \"runtime_ms\": {}",
            json_escape(&self.meta.tool),
            json_escape(&self.meta.config_hash),
            json_escape(&self.meta.timestamp),
            self.meta.runtime_ms
        ));
        out.push_str("},\n  \"rows\": [\n");
        for (i, r) in self.rows.iter().enumerate() {
            let heart = match r.heart {
                Some(h) => format!("\"{}\"", fmt_e12(h)),
                None => "null".to_string(),
            };
            out.push_str(&format!(
                "    {{\"N\": {}, \"ell\": {}, \"delta\": \"{}\", \"L\": \"{}\", \"heart\": {}, \"g\": \"{}\", \"count\": {}, \"rhs\": \"{}\", \"ratio\": \"{}\", \"flag\": {}}}{}\n",
                r.n_level,
                r.ell,
                fmt_e12(r.delta),
                fmt_e12(r.l),
                heart,
                json_escape(&r.g_desc),
                r.count,
                fmt_e12(r.rhs),
                fmt_e12(r.ratio),
                r.flag,
                if i + 1 == self.rows.len() { "" } else { "," }
            ));
        }
        out.push_str("  ]\n}\n");
        out
    }

    pub fn max_ratio(&self) -> f64 {
        self.rows.iter().map(|r| r.ratio).fold(0.0, f64::max)
    }

    pub fn flagged_rows(&self) -> usize {
        self.rows.iter().filter(|r| r.flag).count()
    }
}

/// FNV-1a hash of a canonical configuration string.
pub fn config_hash(s: &str) -> String {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in s.as_bytes() {
        h ^= *b as u64;
        h = h.wrapping_mul(0x1000_0000_01b3);
    }
    format!("{h:016x}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_formatting() {
        assert_eq!(fmt_e12(0.0), "0.000000000000e+00");
        assert_eq!(fmt_e12(1.0), "1.000000000000e+00");
        assert_eq!(fmt_e12(-2.5e-3), "-2.500000000000e-03");
        assert_eq!(fmt_e12(3.14159e10), "3.141590000000e+10");
        assert_eq!(fmt_e12(1.23e123), "1.230000000000e+123");
    }

    fn sample_report() -> CountReport {
        CountReport::new(
            vec![
                CountRow {
                    n_level: 1,
                    ell: 1,
                    delta: 1.0,
                    l: 1.0,
                    heart: None,
                    g_desc: "I".into(),
                    count: 608,
                    rhs: 16.0,
                    ratio: 38.0,
                    flag: false,
                },
                CountRow {
                    n_level: 6,
                    ell: 2,
                    delta: 0.25,
                    l: 4.0,
                    heart: Some(0.0625),
                    g_desc: "diag(y=4)".into(),
                    count: 0,
                    rhs: 12.5,
                    ratio: 0.0,
                    flag: true,
                },
            ],
            ReportMeta {
                tool: "test".into(),
                config_hash: "abc".into(),
                timestamp: "0".into(),
                runtime_ms: 1,
            },
        )
    }

    #[test]
    fn csv_is_byte_stable_with_fixed_header() {
        let r = sample_report();
        let a = r.to_csv();
        let b = r.to_csv();
        assert_eq!(a, b);
        assert!(a.starts_with("N,ell,delta,L,heart,g,count,rhs,ratio,flag\n"));
        assert!(a.ends_with('\n'));
        assert!(!a.contains('\r'));
        // empty heart field for the unconstrained row
        assert!(a.lines().nth(1).unwrap().contains(",,I,"));
    }

    #[test]
    fn json_round_trips_structure() {
        let r = sample_report();
        let j = r.to_json();
        assert_eq!(j, r.to_json());
        assert!(j.contains("\"heart\": null"));
        assert!(j.contains("\"flag\": true"));
    }

    #[test]
    fn config_hash_is_stable() {
        assert_eq!(config_hash("x"), config_hash("x"));
        assert_ne!(config_hash("x"), config_hash("y"));
    }
}

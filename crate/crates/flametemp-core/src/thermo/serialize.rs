//! Fixed-column writer for thermo databases.
//!
//! Emits species blocks with an explicit T_mid for every record (so the
//! output needs no global default line) followed by `END`. Parsing the
//! output reproduces the database field-for-field.

use std::fmt::Write as _;

use crate::error::Error;
use crate::thermo::ThermoDatabase;

/// Serialize a database back to CHEMKIN fixed-column text.
pub fn serialize_thermo(db: &ThermoDatabase) -> Result<String, Error> {
    let mut out = String::new();
    for rec in db.species() {
        if rec.name.len() > 18 {
            return Err(Error::Serialize(format!(
                "species name {:?} exceeds 18 characters",
                rec.name
            )));
        }
        if rec.composition.len() > 4 {
            return Err(Error::Serialize(format!(
                "species {:?} has more than four elements",
                rec.name
            )));
        }
        let mut comp = String::new();
        for (el, count) in &rec.composition {
            if el.len() > 2 {
                return Err(Error::Serialize(format!(
                    "element symbol {el:?} exceeds 2 characters"
                )));
            }
            comp.push_str(&format!("{el:<2}{}", fmt_count(*count, &rec.name)?));
        }

        let mut l1 = format!(
            "{:<18}{:<6}{:<20}{}{:>10.3}{:>10.3}{:>8.2}",
            rec.name, "", comp, rec.phase, rec.poly.t_min, rec.poly.t_max, rec.poly.t_mid
        );
        pad_marker(&mut l1, '1');
        out.push_str(&l1);
        out.push('\n');

        let h = &rec.poly.high;
        let l = &rec.poly.low;
        let rows: [&[f64]; 3] = [
            &[h[0], h[1], h[2], h[3], h[4]],
            &[h[5], h[6], l[0], l[1], l[2]],
            &[l[3], l[4], l[5], l[6]],
        ];
        for (row, marker) in rows.iter().zip(['2', '3', '4']) {
            let mut line = String::new();
            for &c in *row {
                write!(line, "{}", fmt_e15(c)?).unwrap();
            }
            pad_marker(&mut line, marker);
            out.push_str(&line);
            out.push('\n');
        }
    }
    out.push_str("END\n");
    Ok(out)
}

fn pad_marker(line: &mut String, marker: char) {
    while line.len() < 79 {
        line.push(' ');
    }
    line.push(marker);
}

/// Atom count in a 3-character field, right-justified.
fn fmt_count(count: f64, species: &str) -> Result<String, Error> {
    let s = if count.fract() == 0.0 && count >= 0.0 && count <= 999.0 {
        format!("{:>3}", count as i64)
    } else {
        format!("{count:>3.1}")
    };
    if s.len() != 3 || s.trim().parse::<f64>() != Ok(count) {
        return Err(Error::Serialize(format!(
            "atom count {count} of species {species:?} does not fit a 3-character field"
        )));
    }
    Ok(s)
}

/// 15-character scientific field equivalent to C's `%15.8E`.
fn fmt_e15(x: f64) -> Result<String, Error> {
    if !x.is_finite() {
        return Err(Error::Serialize(format!("non-finite coefficient {x}")));
    }
    let s = format!("{x:.8e}"); // e.g. "-1.02089990e3"
    let (mantissa, exp) = s.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    let formatted = format!(
        "{mantissa}E{}{:02}",
        if exp < 0 { '-' } else { '+' },
        exp.abs()
    );
    if formatted.len() > 15 {
        return Err(Error::Serialize(format!(
            "coefficient {x:e} does not fit a 15-character field"
        )));
    }
    Ok(format!("{formatted:>15}"))
}

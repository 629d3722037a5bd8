//! CHEMKIN THERMO fixed-column reader.
//!
//! Layout per species block (1-based columns):
//!
//! ```text
//! line 1: name 1-18 | ref 19-24 | 4 x (element 2 + count 3) 25-44 | phase 45
//!         | T_min 46-55 | T_max 56-65 | T_mid 66-73 (blank -> global default)
//!         | marker '1' in col 80
//! line 2: a1H..a5H in 5 x 15-char fields | marker '2'
//! line 3: a6H a7H a1L a2L a3L            | marker '3'
//! line 4: a4L..a7L in 4 x 15-char fields | marker '4'
//! ```
//!
//! Numeric fields are strict about column positions; trailing whitespace and
//! `!` comment lines are tolerated because real thermo files circulate with
//! ragged tails.

use std::collections::BTreeMap;

use crate::error::Error;
use crate::thermo::{NasaPoly7, SpeciesRecord, ThermoDatabase};

/// Parse a full CHEMKIN THERMO file into a validated database.
pub fn parse_thermo_text(text: &str) -> Result<ThermoDatabase, Error> {
    let lines: Vec<&str> = text.lines().collect();
    let mut records: Vec<SpeciesRecord> = Vec::new();
    let mut warnings: Vec<String> = Vec::new();
    let mut default_t_mid: Option<f64> = None;
    let mut saw_end = false;

    let mut i = 0;
    while i < lines.len() {
        let lineno = i + 1;
        let raw = lines[i];
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('!') {
            i += 1;
            continue;
        }
        let upper = trimmed.to_uppercase();
        if upper == "THERMO" || upper.starts_with("THERMO ") {
            // the following data line carries the three global default temperatures
            i += 1;
            let mut found = false;
            while i < lines.len() {
                let t = lines[i].trim();
                if t.is_empty() || t.starts_with('!') {
                    i += 1;
                    continue;
                }
                let nums: Vec<f64> = t
                    .split_whitespace()
                    .map_while(|w| w.parse::<f64>().ok())
                    .collect();
                if nums.len() < 3 {
                    return Err(Error::parse(
                        i + 1,
                        "expected three global default temperatures after THERMO",
                    ));
                }
                default_t_mid = Some(nums[1]);
                found = true;
                i += 1;
                break;
            }
            if !found {
                return Err(Error::parse(
                    lineno,
                    "THERMO header without a default-temperature line",
                ));
            }
            continue;
        }
        if upper == "END" || upper.starts_with("END ") {
            saw_end = true;
            break;
        }

        if i + 3 >= lines.len() {
            return Err(Error::parse(
                lineno,
                "species block truncated: four lines required",
            ));
        }
        let rec = parse_block(
            [lines[i], lines[i + 1], lines[i + 2], lines[i + 3]],
            lineno,
            default_t_mid,
        )?;
        records.push(rec);
        i += 4;
    }

    if records.is_empty() {
        return Err(Error::parse(lines.len().max(1), "no species blocks found"));
    }
    if !saw_end {
        warnings.push("file has no END terminator (accepted as truncated input)".to_string());
    }
    let mut db = ThermoDatabase::from_records(records)?;
    db.warnings = warnings;
    Ok(db)
}

fn parse_block(
    block: [&str; 4],
    first_line: usize,
    default_t_mid: Option<f64>,
) -> Result<SpeciesRecord, Error> {
    for (k, line) in block.iter().enumerate() {
        if !line.is_ascii() {
            return Err(Error::parse(first_line + k, "non-ASCII character"));
        }
    }
    let l1 = block[0];
    check_marker(l1, first_line, '1', 65)?;

    let name = l1[..l1.len().min(18)]
        .split_whitespace()
        .next()
        .ok_or_else(|| Error::parse(first_line, "missing species name"))?
        .to_uppercase();

    require_len(l1, first_line, 65, "temperature bounds")?;

    let mut composition = BTreeMap::new();
    for slot in 0..4 {
        let a = 24 + 5 * slot;
        let field = &l1[a..a + 5];
        let element = field[..2].trim().to_uppercase();
        if element.is_empty() || element == "0" {
            continue;
        }
        let count_str = field[2..].trim();
        if count_str.is_empty() {
            return Err(Error::parse(
                first_line,
                format!("element {element:?} has a blank atom count"),
            ));
        }
        let count = parse_f64(count_str, first_line, "atom count")?;
        if count < 0.0 {
            return Err(Error::parse(
                first_line,
                format!("negative atom count for element {element:?}"),
            ));
        }
        if count > 0.0 {
            *composition.entry(element).or_insert(0.0) += count;
        }
    }
    if composition.is_empty() {
        return Err(Error::parse(
            first_line,
            format!("species {name:?} has no elemental composition"),
        ));
    }

    let phase_ch = l1.as_bytes()[44] as char;
    if !phase_ch.is_ascii_alphabetic() {
        return Err(Error::parse(
            first_line,
            format!("invalid phase character {phase_ch:?} in column 45"),
        ));
    }
    let phase = phase_ch.to_ascii_uppercase();

    let t_min = parse_f64(l1[45..55].trim(), first_line, "T_min")?;
    let t_max = parse_f64(l1[55..65].trim(), first_line, "T_max")?;
    let t_mid_field = if l1.len() > 65 {
        l1[65..l1.len().min(73)].trim()
    } else {
        ""
    };
    let t_mid = if t_mid_field.is_empty() {
        default_t_mid.ok_or_else(|| {
            Error::parse(
                first_line,
                "blank T_mid and no global default temperature line",
            )
        })?
    } else {
        parse_f64(t_mid_field, first_line, "T_mid")?
    };

    check_marker(block[1], first_line + 1, '2', 75)?;
    check_marker(block[2], first_line + 2, '3', 75)?;
    check_marker(block[3], first_line + 3, '4', 60)?;
    let c2 = coeff_fields::<5>(block[1], first_line + 1)?;
    let c3 = coeff_fields::<5>(block[2], first_line + 2)?;
    let c4 = coeff_fields::<4>(block[3], first_line + 3)?;

    let high = [c2[0], c2[1], c2[2], c2[3], c2[4], c3[0], c3[1]];
    let low = [c3[2], c3[3], c3[4], c4[0], c4[1], c4[2], c4[3]];

    let poly = NasaPoly7 {
        t_min,
        t_mid,
        t_max,
        low,
        high,
    };
    poly.validate()
        .map_err(|msg| Error::parse(first_line, format!("species {name:?}: {msg}")))?;

    Ok(SpeciesRecord {
        name,
        composition,
        phase,
        poly,
        source_line: first_line,
    })
}

fn require_len(line: &str, lineno: usize, needed: usize, what: &str) -> Result<(), Error> {
    if line.len() < needed {
        return Err(Error::parse(
            lineno,
            format!(
                "line too short for {what}: need column {needed}, line has {}",
                line.len()
            ),
        ));
    }
    Ok(())
}

/// Read `N` consecutive 15-character coefficient fields from column 1.
fn coeff_fields<const N: usize>(line: &str, lineno: usize) -> Result<[f64; N], Error> {
    require_len(line, lineno, 15 * N, "polynomial coefficients")?;
    let mut out = [0.0; N];
    for (k, slot) in out.iter_mut().enumerate() {
        let field = l_trim(&line[15 * k..15 * (k + 1)]);
        if field.is_empty() {
            return Err(Error::parse(
                lineno,
                format!("blank coefficient field {}", k + 1),
            ));
        }
        *slot = parse_f64(field, lineno, "coefficient")?;
    }
    Ok(out)
}

fn l_trim(s: &str) -> &str {
    s.trim()
}

fn parse_f64(s: &str, lineno: usize, what: &str) -> Result<f64, Error> {
    // Fortran-style D exponents appear in some circulating files.
    let normalized = if s.contains(['D', 'd']) {
        s.replace('D', "E").replace('d', "e")
    } else {
        s.to_string()
    };
    normalized
        .trim()
        .parse::<f64>()
        .map_err(|_| Error::parse(lineno, format!("unparsable {what}: {s:?}")))
}

/// Verify the block-sequence digit that sits in column 80. Lines whose
/// trailing blanks were stripped are accepted if the digit is still the last
/// character beyond the data region.
fn check_marker(line: &str, lineno: usize, expected: char, data_end: usize) -> Result<(), Error> {
    let found = if line.len() >= 80 {
        line.as_bytes()[79] as char
    } else {
        let trimmed = line.trim_end();
        if trimmed.len() <= data_end {
            return Err(Error::parse(
                lineno,
                format!("missing line marker {expected:?} (line ends at column {})", trimmed.len()),
            ));
        }
        trimmed.chars().last().unwrap()
    };
    if found != expected {
        return Err(Error::parse(
            lineno,
            format!("wrong line marker: expected {expected:?}, found {found:?}"),
        ));
    }
    Ok(())
}

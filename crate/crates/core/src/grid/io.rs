//! Field serialization.
//!
//! Binary layout (little-endian): `n` and `extent` as 8-byte floats, then
//! `n²` interleaved `(re, im)` pairs in row-major order.
//! CSV layout: a schema line, a header row `x1,x2,re,im`, then one row per
//! grid point in storage order.

use std::io::{BufRead, Read, Write};
use std::sync::Arc;

use num_complex::Complex64;

use super::{ComplexField, SpectralGrid};
use crate::error::{Error, Result};

pub const FIELD_CSV_SCHEMA: &str = "# gpcollapse field-csv v1";

pub fn write_field_binary<W: Write>(field: &ComplexField, mut out: W) -> Result<()> {
    let g = field.grid();
    out.write_all(&(g.n() as f64).to_le_bytes())?;
    out.write_all(&g.extent().to_le_bytes())?;
    for z in field.values() {
        out.write_all(&z.re.to_le_bytes())?;
        out.write_all(&z.im.to_le_bytes())?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_field_binary<R: Read>(mut input: R) -> Result<ComplexField> {
    let mut word = [0u8; 8];
    let mut next = |input: &mut R| -> Result<f64> {
        input.read_exact(&mut word)?;
        Ok(f64::from_le_bytes(word))
    };
    let n_raw = next(&mut input)?;
    let extent = next(&mut input)?;
    if !(n_raw.fract() == 0.0 && n_raw >= 8.0 && n_raw <= (1u64 << 20) as f64) {
        return Err(Error::Parse(format!("bad grid size {n_raw} in field header")));
    }
    let grid = SpectralGrid::shared(n_raw as usize, extent)?;
    let mut values = Vec::with_capacity(grid.len());
    for _ in 0..grid.len() {
        let re = next(&mut input)?;
        let im = next(&mut input)?;
        values.push(Complex64::new(re, im));
    }
    ComplexField::new(grid, values)
}

pub fn write_field_csv<W: Write>(field: &ComplexField, mut out: W) -> Result<()> {
    let g = field.grid();
    writeln!(out, "{FIELD_CSV_SCHEMA} n={} extent={:.16e}", g.n(), g.extent())?;
    writeln!(out, "x1,x2,re,im")?;
    for (idx, z) in field.values().iter().enumerate() {
        let (x1, x2) = g.point(idx);
        writeln!(out, "{x1:.16e},{x2:.16e},{:.16e},{:.16e}", z.re, z.im)?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_field_csv<R: BufRead>(input: R) -> Result<ComplexField> {
    let mut lines = input.lines();
    let schema = lines
        .next()
        .ok_or_else(|| Error::Parse("empty field CSV".into()))??;
    if !schema.starts_with(FIELD_CSV_SCHEMA) {
        return Err(Error::Parse(format!("unexpected schema line: {schema}")));
    }
    let mut n = None;
    let mut extent = None;
    for token in schema[FIELD_CSV_SCHEMA.len()..].split_whitespace() {
        if let Some(v) = token.strip_prefix("n=") {
            n = v.parse::<usize>().ok();
        } else if let Some(v) = token.strip_prefix("extent=") {
            extent = v.parse::<f64>().ok();
        }
    }
    let (n, extent) = n
        .zip(extent)
        .ok_or_else(|| Error::Parse("schema line lacks n/extent".into()))?;
    let grid: Arc<SpectralGrid> = SpectralGrid::shared(n, extent)?;
    lines.next().transpose()?;
    let mut values = Vec::with_capacity(grid.len());
    for line in lines {
        let line = line?;
        if line.is_empty() {
            continue;
        }
        let cols: Vec<f64> = line
            .split(',')
            .map(|c| c.trim().parse::<f64>().map_err(|e| Error::Parse(e.to_string())))
            .collect::<Result<_>>()?;
        if cols.len() != 4 {
            return Err(Error::Parse(format!("expected 4 columns, got {}", cols.len())));
        }
        values.push(Complex64::new(cols[2], cols[3]));
    }
    ComplexField::new(grid, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::random::{random_smooth_field, RandomFieldSpec};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn binary_header_layout() {
        let g = SpectralGrid::shared(8, 1.5).unwrap();
        let f = ComplexField::from_fn(&g, |x1, x2| Complex64::new(x1, x2));
        let mut buf = Vec::new();
        write_field_binary(&f, &mut buf).unwrap();
        assert_eq!(buf.len(), 16 + 64 * 16);
        assert_eq!(f64::from_le_bytes(buf[0..8].try_into().unwrap()), 8.0);
        assert_eq!(f64::from_le_bytes(buf[8..16].try_into().unwrap()), 1.5);
        // first sample is (−L, −L)
        assert_eq!(f64::from_le_bytes(buf[16..24].try_into().unwrap()), -1.5);
        assert_eq!(f64::from_le_bytes(buf[24..32].try_into().unwrap()), -1.5);
        // second sample steps along x₁
        assert_eq!(
            f64::from_le_bytes(buf[32..40].try_into().unwrap()),
            -1.5 + 3.0 / 8.0
        );
    }

    #[test]
    fn binary_and_csv_round_trip() {
        let g = SpectralGrid::shared(16, 4.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = random_smooth_field(&g, &mut rng, &RandomFieldSpec::default());

        let mut buf = Vec::new();
        write_field_binary(&f, &mut buf).unwrap();
        let back = read_field_binary(buf.as_slice()).unwrap();
        assert_eq!(back.values(), f.values());

        let mut text = Vec::new();
        write_field_csv(&f, &mut text).unwrap();
        let back = read_field_csv(text.as_slice()).unwrap();
        assert_eq!(back.values(), f.values());
        assert_eq!(back.grid().extent(), 4.0);
    }

    #[test]
    fn truncated_binary_is_an_error() {
        let g = SpectralGrid::shared(8, 1.0).unwrap();
        let f = ComplexField::zeros(&g);
        let mut buf = Vec::new();
        write_field_binary(&f, &mut buf).unwrap();
        buf.truncate(100);
        assert!(read_field_binary(buf.as_slice()).is_err());
    }
}

//! Text forms accepted on the command line: coefficient lists, root lists
//! with complex entries, and shift grids.

use muroot::Complex64;

fn parse_f64(text: &str) -> Result<f64, String> {
    let v: f64 = text
        .trim()
        .parse()
        .map_err(|_| format!("`{text}` is not a number"))?;
    if !v.is_finite() {
        return Err(format!("`{text}` is not finite"));
    }
    Ok(v)
}

/// Comma-separated coefficients, ascending from the constant term.
pub fn parse_coeffs(text: &str) -> Result<Vec<f64>, String> {
    text.split(',')
        .map(parse_f64)
        .collect::<Result<Vec<f64>, String>>()
        .map_err(|e| format!("malformed coefficient list: {e}"))
}

/// One root: a real like `2.5`, or a complex like `1+2i`, `-3e-1i`, `1-i`.
pub fn parse_complex(text: &str) -> Result<Complex64, String> {
    let s = text.trim();
    let Some(body) = s.strip_suffix(['i', 'I']) else {
        return Ok(Complex64::new(parse_f64(s)?, 0.0));
    };
    // The sign separating the parts is the last +/- that does not follow an
    // exponent marker and is not the leading sign.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| matches!(bytes[i], b'+' | b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let (re_part, im_part) = match split {
        Some(i) => (&body[..i], &body[i..]),
        None => ("", body),
    };
    let re = if re_part.is_empty() {
        0.0
    } else {
        parse_f64(re_part)?
    };
    let im = match im_part {
        "" | "+" => 1.0,
        "-" => -1.0,
        t => parse_f64(t)?,
    };
    Ok(Complex64::new(re, im))
}

/// Comma-separated roots.
pub fn parse_roots(text: &str) -> Result<Vec<Complex64>, String> {
    text.split(',')
        .map(parse_complex)
        .collect::<Result<Vec<Complex64>, String>>()
        .map_err(|e| format!("malformed root list: {e}"))
}

/// Inclusive grid `lo:step:hi` with a positive step.
pub fn parse_shift_grid(text: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = text.split(':').collect();
    let [lo, step, hi] = parts[..] else {
        return Err(format!("`{text}` is not a lo:step:hi shift grid"));
    };
    let lo = parse_f64(lo)?;
    let step = parse_f64(step)?;
    let hi = parse_f64(hi)?;
    if step <= 0.0 {
        return Err("shift step must be positive".into());
    }
    if hi < lo {
        return Err("shift grid upper end is below the lower end".into());
    }
    let count = ((hi - lo) / step * (1.0 + 1e-12)).floor() as usize + 1;
    if count > 100_000 {
        return Err("shift grid has more than 100000 points".into());
    }
    Ok((0..count).map(|i| lo + i as f64 * step).collect())
}

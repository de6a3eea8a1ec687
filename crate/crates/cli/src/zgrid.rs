//! Parsing of complex numbers (`1.5-2i`, `3i`, `-i`, `0.25`) and of z-grids
//! `re0:re1:n×im0:im1:m` (an ASCII `x` works too).

use weylkit::Complex64;

pub fn parse_complex(text: &str) -> Result<Complex64, String> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("cannot parse {text:?} as a complex number");
    let Some(body) = s.strip_suffix('i') else {
        return s.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| bad());
    };
    // The split is the last sign that is not the sign of an exponent.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (body[..k].parse::<f64>().map_err(|_| bad())?, &body[k..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        v => v.parse::<f64>().map_err(|_| bad())?,
    };
    Ok(Complex64::new(re, im))
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    (0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect()
}

fn parse_axis(text: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("axis {text:?} must be lo:hi:count"));
    }
    let lo = parts[0].trim().parse::<f64>().map_err(|e| format!("{text:?}: {e}"))?;
    let hi = parts[1].trim().parse::<f64>().map_err(|e| format!("{text:?}: {e}"))?;
    let n = parts[2].trim().parse::<usize>().map_err(|e| format!("{text:?}: {e}"))?;
    if n == 0 {
        return Err(format!("axis {text:?} needs at least one point"));
    }
    Ok(linspace(lo, hi, n))
}

/// Points of the grid, real part outermost.
pub fn parse_zgrid(text: &str) -> Result<Vec<Complex64>, String> {
    let (re, im) = text
        .split_once('×')
        .or_else(|| text.split_once('x'))
        .ok_or_else(|| format!("z-grid {text:?} must look like re0:re1:n×im0:im1:m"))?;
    let (res, ims) = (parse_axis(re)?, parse_axis(im)?);
    Ok(res.iter().flat_map(|&r| ims.iter().map(move |&i| Complex64::new(r, i))).collect())
}

//! Sparsity lists: `start:stop:step` (inclusive), `a,b,c`, or a single value.

pub fn parse_k_values(s: &str) -> Result<Vec<usize>, String> {
    let num = |t: &str| {
        t.trim()
            .parse::<usize>()
            .map_err(|_| format!("`{t}` is not a non-negative integer"))
    };
    if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("range `{s}` must look like start:stop:step"));
        }
        let (start, stop, step) = (num(parts[0])?, num(parts[1])?, num(parts[2])?);
        if step == 0 {
            return Err("range step must be positive".into());
        }
        if start > stop {
            return Err(format!("range start {start} exceeds stop {stop}"));
        }
        Ok((start..=stop).step_by(step).collect())
    } else {
        let vals = s.split(',').map(num).collect::<Result<Vec<_>, _>>()?;
        if vals.is_empty() {
            return Err("empty k list".into());
        }
        Ok(vals)
    }
}

//! Integer list arguments: `3`, `1-5` (inclusive) or `1,2,4`. Parts may be mixed,
//! as in `1-3,7`.

pub fn parse_list(text: &str) -> Result<Vec<u64>, String> {
    let mut out = Vec::new();
    for part in text.split(',') {
        let part = part.trim();
        let bad = || format!("invalid range {part:?} (expected N, A-B or a comma list)");
        match part.split_once('-') {
            Some((a, b)) => {
                let a: u64 = a.trim().parse().map_err(|_| bad())?;
                let b: u64 = b.trim().parse().map_err(|_| bad())?;
                if a > b {
                    return Err(format!("empty range {part:?}"));
                }
                out.extend(a..=b);
            }
            None => out.push(part.parse().map_err(|_| bad())?),
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Like [`parse_list`], rejecting zero.
pub fn parse_positive_list(text: &str) -> Result<Vec<usize>, String> {
    let values = parse_list(text)?;
    if values.contains(&0) {
        return Err(format!("{text:?} contains 0; values must be positive"));
    }
    Ok(values.into_iter().map(|v| v as usize).collect())
}

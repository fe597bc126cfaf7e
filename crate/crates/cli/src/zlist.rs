//! Atomic-number lists: `14`, `3,9,14`, `3..20`, `3..84:paper`, `paper`.

/// Parses a Z list against the published Z values of a shell, if any.
/// The result is sorted and free of duplicates.
pub fn parse_z_list(spec: &str, paper: Option<&[u32]>) -> Result<Vec<u32>, String> {
    let mut out = Vec::new();
    for token in spec.split(',').map(str::trim) {
        if token.is_empty() {
            return Err(format!("empty entry in Z list '{spec}'"));
        }
        let (range, paper_only) = match token.strip_suffix(":paper") {
            Some(r) => (r, true),
            None if token == "paper" => ("", true),
            None => (token, false),
        };
        let bounds = if range.is_empty() {
            None
        } else if let Some((lo, hi)) = range.split_once("..") {
            let (lo, hi) = (parse_z(lo)?, parse_z(hi)?);
            if lo > hi {
                return Err(format!("empty range '{range}'"));
            }
            Some((lo, hi))
        } else {
            let z = parse_z(range)?;
            Some((z, z))
        };
        if paper_only {
            let paper = paper.ok_or_else(|| format!("no published Z values to select with '{token}'"))?;
            out.extend(paper.iter().filter(|&&z| bounds.is_none_or(|(lo, hi)| (lo..=hi).contains(&z))));
        } else if let Some((lo, hi)) = bounds {
            out.extend(lo..=hi);
        }
    }
    out.sort_unstable();
    out.dedup();
    if out.is_empty() {
        return Err(format!("Z list '{spec}' selects nothing"));
    }
    Ok(out)
}

fn parse_z(s: &str) -> Result<u32, String> {
    match s.trim().parse::<u32>() {
        Ok(0) => Err("atomic number must be at least 1".to_string()),
        Ok(z) => Ok(z),
        Err(_) => Err(format!("invalid atomic number '{s}'")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const PAPER: [u32; 5] = [3, 9, 14, 29, 84];

    #[test]
    fn plain_values_and_ranges() {
        assert_eq!(parse_z_list("14", None).unwrap(), vec![14]);
        assert_eq!(parse_z_list("9, 3,9", None).unwrap(), vec![3, 9]);
        assert_eq!(parse_z_list("3..6", None).unwrap(), vec![3, 4, 5, 6]);
        assert_eq!(parse_z_list("20..20,1", None).unwrap(), vec![1, 20]);
    }

    #[test]
    fn paper_selection() {
        assert_eq!(parse_z_list("paper", Some(&PAPER)).unwrap(), PAPER.to_vec());
        assert_eq!(parse_z_list("3..84:paper", Some(&PAPER)).unwrap(), PAPER.to_vec());
        assert_eq!(parse_z_list("10..50:paper", Some(&PAPER)).unwrap(), vec![14, 29]);
        assert_eq!(parse_z_list("paper,1", Some(&PAPER)).unwrap()[0], 1);
    }

    #[test]
    fn rejects_bad_lists() {
        for bad in ["", "0", "a", "5..3", "3..", ",3", "40..50:paper"] {
            assert!(parse_z_list(bad, Some(&PAPER)).is_err(), "{bad}");
        }
        assert!(parse_z_list("paper", None).is_err());
    }
}

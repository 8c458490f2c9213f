//! Subspace selectors: comma-separated vectors, each a `+`-combination of
//! unit vectors `e<i>` (1-based) and coordinate tuples `(a,b,…)`. The zero
//! space is written `0`.

use qleak_core::{Field, Subspace};

use crate::error::{CliError, CliResult};

fn bad(msg: impl Into<String>) -> CliError {
    CliError::Input(format!("selector: {}", msg.into()))
}

/// Splits on commas that are not inside parentheses.
fn split_top_level(text: &str) -> CliResult<Vec<&str>> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in text.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth < 0 {
                    return Err(bad("unbalanced ')'"));
                }
            }
            ',' if depth == 0 => {
                parts.push(&text[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err(bad("unbalanced '('"));
    }
    parts.push(&text[start..]);
    Ok(parts)
}

fn parse_term(f: &Field, term: &str, n: usize) -> CliResult<Vec<u32>> {
    let term = term.trim();
    if let Some(idx) = term.strip_prefix('e') {
        let i: usize = idx.parse().map_err(|_| bad(format!("bad unit vector `{term}`")))?;
        if i == 0 || i > n {
            return Err(bad(format!("index {i} out of range 1..={n}")));
        }
        let mut v = vec![0; n];
        v[i - 1] = 1;
        return Ok(v);
    }
    if let Some(inner) = term.strip_prefix('(').and_then(|t| t.strip_suffix(')')) {
        let v = inner
            .split(',')
            .map(|x| x.trim().parse::<u32>().map_err(|_| bad(format!("bad coordinate in `{term}`"))))
            .collect::<CliResult<Vec<u32>>>()?;
        if v.len() != n {
            return Err(bad(format!("tuple `{term}` has {} coordinates, expected {n}", v.len())));
        }
        if let Some(x) = v.iter().find(|&&x| !f.contains(x)) {
            return Err(bad(format!("coordinate {x} is not an element of GF({})", f.order())));
        }
        return Ok(v);
    }
    Err(bad(format!("unrecognised term `{term}`")))
}

pub fn parse_subspace_selector(f: &Field, text: &str, n: usize) -> CliResult<Subspace> {
    let text = text.trim();
    if text == "0" {
        return Ok(Subspace::zero(n));
    }
    if text.is_empty() {
        return Err(bad("empty selector (write `0` for the zero space)"));
    }
    let mut rows = Vec::new();
    for vector in split_top_level(text)? {
        if vector.trim().is_empty() {
            return Err(bad("empty vector"));
        }
        let mut acc = vec![0; n];
        for term in vector.split('+') {
            let v = parse_term(f, term, n)?;
            for (a, b) in acc.iter_mut().zip(v) {
                *a = f.add(*a, b);
            }
        }
        rows.push(acc);
    }
    Ok(Subspace::span(f, &rows, n)?)
}

/// Renders `v` in selector syntax, so that parsing the output gives `v` back.
pub fn render_subspace(v: &Subspace) -> String {
    if v.is_zero() {
        return "0".to_string();
    }
    v.basis()
        .iter()
        .map(|row| {
            if row.iter().all(|&x| x <= 1) {
                row.iter()
                    .enumerate()
                    .filter(|(_, &x)| x == 1)
                    .map(|(i, _)| format!("e{}", i + 1))
                    .collect::<Vec<_>>()
                    .join("+")
            } else {
                let inner: Vec<String> = row.iter().map(|x| x.to_string()).collect();
                format!("({})", inner.join(","))
            }
        })
        .collect::<Vec<_>>()
        .join(",")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> Field {
        Field::new(2, 1, None).unwrap()
    }

    #[test]
    fn grammar_examples() {
        let f = f2();
        let a = parse_subspace_selector(&f, "e2+e3", 4).unwrap();
        assert_eq!(a.basis(), &[vec![0, 1, 1, 0]]);
        let b = parse_subspace_selector(&f, "(1,0,1,1)", 4).unwrap();
        assert_eq!(b.basis(), &[vec![1, 0, 1, 1]]);
        let c = parse_subspace_selector(&f, "e2,e4", 4).unwrap();
        assert_eq!(c, Subspace::coordinate(4, &[1, 3]));
        assert!(parse_subspace_selector(&f, "0", 4).unwrap().is_zero());
        let d = parse_subspace_selector(&f, "e1+(0,1,0,0), (0,0,1,0)", 4).unwrap();
        assert_eq!(d.dim(), 2);
    }

    #[test]
    fn rejects_malformed_input() {
        let f = f2();
        for bad in ["", "e0", "e5", "(1,0)", "(1,0,2,0)", "x1", "e1,,e2", "(1,0,1,0"] {
            assert!(parse_subspace_selector(&f, bad, 4).is_err(), "{bad:?}");
        }
    }

    #[test]
    fn render_round_trips() {
        let f = Field::new(3, 1, None).unwrap();
        for text in ["0", "e1+e3", "(1,2,0),e3", "e1,e2,e3"] {
            let v = parse_subspace_selector(&f, text, 3).unwrap();
            assert_eq!(parse_subspace_selector(&f, &render_subspace(&v), 3).unwrap(), v);
        }
        assert_eq!(render_subspace(&parse_subspace_selector(&f2(), "e2+e3", 4).unwrap()), "e2+e3");
    }

    #[test]
    fn rendering_round_trips_over_the_lattice() {
        use qleak_core::subspace::all_subspaces;
        for (q, n) in [(2, 4), (3, 3)] {
            let f = Field::new(q, 1, None).unwrap();
            for v in all_subspaces(&f, n).unwrap() {
                let text = render_subspace(&v);
                assert_eq!(parse_subspace_selector(&f, &text, n).unwrap(), v, "{text}");
            }
        }
    }
}

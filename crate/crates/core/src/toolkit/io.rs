//! Plain-text instance and solution files.
//!
//! Knapsack: a line `n d W`, then one line `w p1 … pd` per item.
//! TSP: a line `n d`, then `d` blocks of `n` lines `x y` (the city positions
//! for each objective); costs are derived on load.
//! Solutions: a header `# <problem> <d> <sense>`, then one solution per line
//! as space-separated item indices or a city permutation.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::problem::{Encoding, Payload, ProblemInstance, Sense, SolutionRecord};

pub fn write_instance(instance: &ProblemInstance) -> Result<String> {
    let mut out = String::new();
    let d = instance.objectives();
    match instance.payload() {
        Payload::Knapsack(k) => {
            writeln!(out, "{} {} {}", k.weights.len(), d, k.capacity).unwrap();
            for (w, p) in k.weights.iter().zip(&k.profits) {
                write!(out, "{w}").unwrap();
                for v in p {
                    write!(out, " {v}").unwrap();
                }
                out.push('\n');
            }
        }
        Payload::Tsp(t) => {
            let coords = t.coordinates.as_ref().ok_or_else(|| {
                Error::Configuration("TSP instances without coordinates cannot be written".into())
            })?;
            writeln!(out, "{} {}", t.cities(), d).unwrap();
            for block in coords {
                for (x, y) in block {
                    writeln!(out, "{x} {y}").unwrap();
                }
            }
        }
    }
    Ok(out)
}

fn numbers<T: std::str::FromStr>(line: &str, lineno: usize) -> Result<Vec<T>> {
    line.split_whitespace()
        .map(|t| {
            t.parse()
                .map_err(|_| Error::Parse(format!("line {lineno}: bad number {t:?}")))
        })
        .collect()
}

/// Parses either file format; the header's field count tells them apart.
pub fn parse_instance(text: &str) -> Result<ProblemInstance> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hl, header) = lines.next().ok_or_else(|| Error::Parse("empty instance file".into()))?;
    let head: Vec<u64> = numbers(header, hl)?;
    let mut expect = |what: &str| {
        lines
            .next()
            .ok_or_else(|| Error::Parse(format!("unexpected end of file, expected {what}")))
    };
    let instance = match *head.as_slice() {
        [n, d, capacity] => {
            let mut weights = Vec::new();
            let mut profits = Vec::new();
            for _ in 0..n {
                let (ln, line) = expect("an item line")?;
                let v: Vec<u64> = numbers(line, ln)?;
                if v.len() != d as usize + 1 {
                    return Err(Error::Parse(format!("line {ln}: expected {} values", d + 1)));
                }
                weights.push(v[0]);
                profits.push(v[1..].to_vec());
            }
            ProblemInstance::knapsack(weights, capacity, profits)
        }
        [n, d] => {
            let mut coords = Vec::new();
            for _ in 0..d {
                let mut block = Vec::new();
                for _ in 0..n {
                    let (ln, line) = expect("a coordinate line")?;
                    let v: Vec<i64> = numbers(line, ln)?;
                    if v.len() != 2 {
                        return Err(Error::Parse(format!("line {ln}: expected `x y`")));
                    }
                    block.push((v[0], v[1]));
                }
                coords.push(block);
            }
            ProblemInstance::tsp_from_coordinates(coords)
        }
        _ => return Err(Error::Parse(format!("line {hl}: header must be `n d W` or `n d`"))),
    }
    .map_err(|e| match e {
        Error::Contract(m) => Error::Parse(m),
        other => other,
    })?;
    if let Some((ln, _)) = lines.next() {
        return Err(Error::Parse(format!("line {ln}: trailing content")));
    }
    Ok(instance)
}

pub fn write_solutions(instance: &ProblemInstance, solutions: &[SolutionRecord]) -> String {
    let mut out = format!(
        "# {} {} {}\n",
        instance.problem_name(),
        instance.objectives(),
        instance.sense()
    );
    for s in solutions {
        writeln!(out, "{}", s.encoding).unwrap();
    }
    out
}

/// Parses a solution file for `instance`, evaluating every solution.
pub fn parse_solutions(text: &str, instance: &ProblemInstance) -> Result<Vec<SolutionRecord>> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| Error::Parse("empty solution file".into()))?;
    let fields: Vec<&str> = header.trim_start_matches('#').split_whitespace().collect();
    let [problem, d, sense] = fields.as_slice() else {
        return Err(Error::Parse("solution header must be `# <problem> <d> <sense>`".into()));
    };
    let d: usize = d.parse().map_err(|_| Error::Parse(format!("bad objective count {d:?}")))?;
    let sense = Sense::parse(sense)?;
    if !header.starts_with('#')
        || *problem != instance.problem_name()
        || d != instance.objectives()
        || sense != instance.sense()
    {
        return Err(Error::Parse(format!(
            "solution header {header:?} does not match the {} instance",
            instance.problem_name()
        )));
    }
    let mut out = Vec::new();
    for (i, line) in lines.enumerate() {
        let idx: Vec<usize> = numbers(line, i + 2)?;
        let encoding = match instance.payload() {
            Payload::Knapsack(_) => Encoding::Items(idx),
            Payload::Tsp(_) => {
                if idx.is_empty() {
                    continue;
                }
                Encoding::Tour(idx)
            }
        };
        out.push(SolutionRecord::new(instance, encoding)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::toolkit::generators::{gen_knapsack_conflicting, gen_tsp};

    #[test]
    fn knapsack_round_trip() {
        let inst = gen_knapsack_conflicting(7, 3).unwrap();
        let text = write_instance(&inst).unwrap();
        let back = parse_instance(&text).unwrap();
        assert_eq!(back, inst);
        assert_eq!(write_instance(&back).unwrap(), text);
        assert!(text.starts_with("7 3 "));
    }

    #[test]
    fn tsp_round_trip() {
        let inst = gen_tsp(5, 3, 9).unwrap();
        let text = write_instance(&inst).unwrap();
        assert_eq!(text.lines().count(), 1 + 15);
        let back = parse_instance(&text).unwrap();
        assert_eq!(back, inst);
        assert_eq!(write_instance(&back).unwrap(), text);
    }

    // Snapshots recomputed from the generator's definition outside Rust.
    #[test]
    fn generator_snapshots() {
        let k = crate::toolkit::generators::gen_knapsack_uniform(4, 3, 42).unwrap();
        assert_eq!(
            write_instance(&k).unwrap(),
            "4 3 1010\n152 313 959 562\n475 592 205 90\n615 747 684 587\n778 697 21 82\n"
        );
        let t = gen_tsp(3, 2, 7).unwrap();
        assert_eq!(
            write_instance(&t).unwrap(),
            "3 2\n310 451\n308 528\n348 370\n628 735\n475 217\n363 372\n"
        );
    }

    #[test]
    fn rejects_malformed_files() {
        assert!(matches!(parse_instance(""), Err(Error::Parse(_))));
        assert!(matches!(parse_instance("2 2 5\n1 2 3\n"), Err(Error::Parse(_))));
        assert!(matches!(parse_instance("1 2 5\n1 2\n"), Err(Error::Parse(_))));
        assert!(matches!(parse_instance("1 2 5\n1 2 x\n"), Err(Error::Parse(_))));
        assert!(matches!(parse_instance("1 2 5\n1 2 3\n4\n"), Err(Error::Parse(_))));
    }

    #[test]
    fn solutions_round_trip_including_the_empty_packing() {
        let inst = ProblemInstance::knapsack(vec![2, 3], 5, vec![vec![3, 1], vec![1, 4]]).unwrap();
        let sols = vec![
            SolutionRecord::new(&inst, Encoding::Items(vec![])).unwrap(),
            SolutionRecord::new(&inst, Encoding::Items(vec![0, 1])).unwrap(),
        ];
        let text = write_solutions(&inst, &sols);
        assert_eq!(text, "# knapsack 2 maximize\n\n0 1\n");
        let back = parse_solutions(&text, &inst).unwrap();
        assert_eq!(back, sols);
    }

    #[test]
    fn infeasible_solutions_are_reported() {
        let inst = ProblemInstance::knapsack(vec![2, 3], 4, vec![vec![3, 1], vec![1, 4]]).unwrap();
        let r = parse_solutions("# knapsack 2 maximize\n0 1\n", &inst);
        assert!(matches!(r, Err(Error::Feasibility(_))));
        let r = parse_solutions("# tsp 2 minimize\n0 1\n", &inst);
        assert!(matches!(r, Err(Error::Parse(_))));
    }
}

//! Plain-text solution dumps: a header line with (a, b, N, p, t) followed by
//! one row of p+1 modal coefficients per element. Numbers use the shortest
//! representation that round-trips exactly, independent of locale.

use crate::dg::DgSolution;
use crate::mesh::Mesh;
use crate::{Error, Result};
use std::fmt::Write as _;

pub fn write_solution(sol: &DgSolution<f64>) -> String {
    let mut out = String::from("# a b N p t\n");
    let _ = writeln!(
        out,
        "{} {} {} {} {}",
        sol.mesh.a, sol.mesh.b, sol.mesh.n, sol.degree, sol.time
    );
    for j in 0..sol.mesh.n {
        let row: Vec<String> = sol.element(j).iter().map(|c| c.to_string()).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    out
}

pub fn read_solution(text: &str) -> Result<DgSolution<f64>> {
    let mut lines = text.lines().filter(|l| !l.trim_start().starts_with('#'));
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty solution dump".into()))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 5 {
        return Err(Error::Parse(format!(
            "header needs 5 fields (a b N p t), got {}",
            fields.len()
        )));
    }
    let a: f64 = parse(fields[0])?;
    let b: f64 = parse(fields[1])?;
    let n: usize = fields[2]
        .parse()
        .map_err(|_| Error::Parse(format!("bad element count '{}'", fields[2])))?;
    let p: usize = fields[3]
        .parse()
        .map_err(|_| Error::Parse(format!("bad degree '{}'", fields[3])))?;
    let t: f64 = parse(fields[4])?;

    let mesh = Mesh::new(a, b, n)?;
    let mut sol = DgSolution::zeros(mesh, p);
    sol.time = t;
    for j in 0..n {
        let line = lines
            .next()
            .ok_or_else(|| Error::Parse(format!("missing coefficient row {j}")))?;
        let vals: Vec<&str> = line.split_whitespace().collect();
        if vals.len() != p + 1 {
            return Err(Error::Parse(format!(
                "row {j} has {} coefficients, expected {}",
                vals.len(),
                p + 1
            )));
        }
        for (m, v) in vals.iter().enumerate() {
            sol.element_mut(j)[m] = parse(v)?;
        }
    }
    Ok(sol)
}

fn parse(s: &str) -> Result<f64> {
    s.parse()
        .map_err(|_| Error::Parse(format!("bad number '{s}'")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dg::l2_project;

    #[test]
    fn roundtrip_is_bit_exact() {
        let mesh = Mesh::new(0.0, 1.0, 12).unwrap();
        let mut sol = l2_project(|x| (7.1 * x).sin() / 3.0, mesh, 3);
        sol.time = 0.625;
        let text = write_solution(&sol);
        let back = read_solution(&text).unwrap();
        assert_eq!(back.coeffs, sol.coeffs);
        assert_eq!(back.time, sol.time);
        assert_eq!(back.degree, sol.degree);
        assert_eq!(back.mesh.n, sol.mesh.n);
    }

    #[test]
    fn malformed_dumps_are_rejected() {
        assert!(read_solution("").is_err());
        assert!(read_solution("0 1 4 1").is_err());
        assert!(read_solution("# a b N p t\n0 1 2 1 0\n1 2\n1").is_err());
        assert!(read_solution("0 1 1 0 zero\n1").is_err());
    }
}

use dgsiac::study::*;
use dgsiac::reference::*;
use dgsiac::Problem;

fn check(label: &str, cfg: RunConfig, table: &RefTable) {
    let rep = run_convergence_study(&cfg);
    println!("{label}");
    for row in &rep.rows {
        match row {
            RowOutcome::Ok(r) => {
                let rf = table.rows.iter().find(|x| x.n == r.n).unwrap();
                println!("  N={:4} dg x{:.3} pp x{:.3}  (dg={:.3e} pp={:.3e}) ord=({:?},{:?}) ref_ord=({:?},{:?})",
                    r.n, r.dg_l2/rf.dg, r.pp_l2/rf.pp, r.dg_l2, r.pp_l2,
                    r.dg_order.map(|o|(o*100.).round()/100.), r.pp_order.map(|o|(o*100.).round()/100.),
                    rf.dg_order, rf.pp_order);
            }
            RowOutcome::Skipped { n, .. } => println!("  N={n:4} skipped (needs extended)"),
            RowOutcome::Failed { n, error } => println!("  N={n:4} FAILED: {error}"),
        }
    }
}

fn main() {
    let std_int = |t: &RefTable| IntegratorSpec::Sdg { sweeps: None };
    for table in TABLE2.iter() {
        let mut cfg = RunConfig::new(table.problem, table.degree, vec![20, 40, 80, 160], std_int(table));
        cfg.cfl = table.cfl;
        check(&format!("Table2 p={} standard", table.degree), cfg, table);
    }
    for table in TABLE4.iter() {
        let mut cfg = RunConfig::new(table.problem, table.degree, vec![20, 40, 80, 160], std_int(table));
        cfg.cfl = table.cfl;
        check(&format!("Table4 p={} standard", table.degree), cfg, table);
    }
    for table in TABLE5.iter() {
        let mut cfg = RunConfig::new(table.problem, table.degree, vec![20, 40, 80, 160], std_int(table));
        cfg.cfl = table.cfl;
        check(&format!("Table5 p={} standard", table.degree), cfg, table);
    }
}

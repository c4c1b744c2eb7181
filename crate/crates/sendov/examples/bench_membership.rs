use sendov::tables;
use sendov::roots::{check_membership, find_roots};
use std::time::Instant;

fn main() {
    for rec in tables::records().unwrap() {
        if rec.n > 401 { continue; }
        let spec = tables::spec_for(&rec).unwrap();
        let t0 = Instant::now();
        let rs = find_roots(&spec);
        let t_roots = t0.elapsed();
        match &rs {
            Ok(rs) => println!("table {} n={}: find_roots {:?} max_mod {:.15}", rec.table_id, rec.n, t_roots, rs.max_modulus()),
            Err(e) => println!("table {} n={}: find_roots {:?} ERROR {e}", rec.table_id, rec.n, t_roots),
        }
        let t1 = Instant::now();
        match check_membership(&spec, 1e-9) {
            Ok(m) => println!("   membership {:?}: member={} margin={:.3e} disk={:?}", t1.elapsed(), m.is_member, m.margin, m.disk_count),
            Err(e) => println!("   membership {:?}: ERROR {e}", t1.elapsed(), ),
        }
    }
}

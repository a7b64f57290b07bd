//! Decide tropical dependence of small families.

use tropdiv::independence::{find_dependence, Dependence};
use tropdiv::plfunc::min_combination;
use tropdiv::rational::qi;
use tropdiv::{MetricGraph, PlFunction};

fn line(g: &MetricGraph, slope: i64) -> PlFunction {
    PlFunction::new(g, vec![vec![(qi(0), qi(0)), (qi(1), qi(slope))]]).unwrap()
}

fn show(name: &str, g: &MetricGraph, fs: &[PlFunction]) -> tropdiv::Result<()> {
    match find_dependence(g, fs)? {
        Dependence::Dependent(c) => {
            let offs: Vec<String> = c
                .offsets
                .iter()
                .map(|o| o.as_ref().map_or("inf".into(), |x| x.to_string()))
                .collect();
            println!("{name}: dependent, offsets [{}]", offs.join(", "));
        }
        Dependence::Independent(rep) => {
            println!("{name}: independent ({} offset vectors examined)", rep.examined.len())
        }
    }
    Ok(())
}

fn main() -> tropdiv::Result<()> {
    let g = MetricGraph::from_edges(2, &[(0, 1, qi(1))])?;
    show("{0, x, -x}", &g, &[line(&g, 0), line(&g, 1), line(&g, -1)])?;
    let m = min_combination(&g, &[line(&g, 1), line(&g, -1)], &[qi(0), qi(1)])?;
    show("{x, -x, min(x, 1 - x)}", &g, &[line(&g, 1), line(&g, -1), m])?;
    show("{0, 0}", &g, &[line(&g, 0), line(&g, 0)])?;
    Ok(())
}

// Saturate Lin(A·h·A) for a block fixture and check the closure certificate.
//
// cargo run --example span_closure

use lindecomp::linalg::Field;
use lindecomp::platform::make_block_fixture;
use lindecomp::span::span_closure;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let field = Field::new(1009)?;
    let fx = make_block_fixture(2, 2, 2, 2, field, 11)?;

    for (name, side) in [("A", &fx.a_side), ("B", &fx.b_side)] {
        let basis = span_closure(side, &fx.h)?;
        let stats = basis.stats();
        println!(
            "Lin({name}·h·{name}): dim {} of {}, {} productive lists, {} candidates, list sizes {:?}",
            basis.dim(),
            fx.dimension * fx.dimension,
            stats.productive_lists,
            stats.candidates_examined,
            stats.list_sizes
        );
        assert!(basis.closure_holds(side)?);
        assert!(basis.multipliers_consistent()?);
    }
    Ok(())
}

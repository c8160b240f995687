// Usage: cargo run --release --example dlb_landscape
//
// Anatomy of the deceptive block landscape: per-block scores, the all-zeros
// trap, the prefix structure of the total fitness, wider blocks, and the
// neutral-bit wrapper.

use edabench::fitness::{deceptive_block, BitString, FitnessFunction};

fn main() -> edabench::Result<()> {
    println!("Block scores (2-bit blocks): 11 > 00 > 01 = 10");
    for bits in [[true, true], [false, false], [false, true], [true, false]] {
        let text: String = bits.iter().map(|&b| if b { '1' } else { '0' }).collect();
        println!("  block {text} scores {}", deceptive_block(&bits, 2)?);
    }
    println!();
    println!("The single-zero blocks score worst, so a hill climber inside a block");
    println!("is pulled to 00 — one flip away from 11 becomes two flips away.");
    println!();

    let f = FitnessFunction::dlb();
    println!("Total fitness over n = 12 (prefix of 11-blocks plus the next block):");
    for text in [
        "111111111111",
        "111111111100",
        "111111111101",
        "111111110011",
        "110000000000",
        "010101010101",
        "000000000000",
    ] {
        let x: BitString = text.parse()?;
        println!("  f({text}) = {:>2}", f.evaluate(&x)?);
    }
    let optimum = f.optimum(12)?.expect("known optimum");
    println!("  optimum value: {optimum} (the all-ones string, and only it)");
    println!();

    let wide = FitnessFunction::dlb_with_block_size(4)?;
    println!("Wider blocks, k = 4 over n = 12:");
    for text in ["111111111111", "111100000000", "111011111111"] {
        let x: BitString = text.parse()?;
        println!("  f({text}) = {:>2}", wide.evaluate(&x)?);
    }
    println!();

    let padded: FitnessFunction = "neutral:dlb:13,14".parse()?;
    println!("Neutral padding ({padded}): bits 13 and 14 never affect fitness,");
    let a: BitString = "11111111111100".parse()?;
    let b: BitString = "11111111111111".parse()?;
    println!(
        "  f({a}) = {} and f({b}) = {}",
        padded.evaluate(&a)?,
        padded.evaluate(&b)?
    );
    println!("  which makes them probes for pure genetic drift.");
    Ok(())
}

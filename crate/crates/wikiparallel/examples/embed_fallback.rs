//! The builtin offline embedder: hashed character n-grams, unit norm.
//! Surface similarity only, but deterministic and dependency-free.
//! Run with `cargo run --example embed_fallback`.

use wikiparallel::builtin_fallback_embed;
use wikiparallel::embed::dot;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dimension = 256;
    let base = builtin_fallback_embed("The cat sat on the mat.", dimension)?;
    let near = builtin_fallback_embed("The black cat sat on the mat.", dimension)?;
    let far = builtin_fallback_embed("Quarterly steel production rose sharply.", dimension)?;

    let norm: f64 = base.iter().map(|v| v * v).sum::<f64>().sqrt();
    println!("dimension {dimension}, norm {norm:.9}");
    println!("cos(base, base) = {:.6}", dot(&base, &base));
    println!("cos(base, near) = {:.6}", dot(&base, &near));
    println!("cos(base, far)  = {:.6}", dot(&base, &far));

    let again = builtin_fallback_embed("The cat sat on the mat.", dimension)?;
    println!("repeat embedding identical: {}", base == again);

    println!(
        "empty text is rejected: {:?}",
        builtin_fallback_embed("   ", dimension).err().map(|e| e.to_string())
    );
    Ok(())
}

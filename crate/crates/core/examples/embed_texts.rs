//! The offline embedder: unit vectors whose cosine tracks shared wording.

use consultrag::embedding::{embed_all, EmbeddingProvider, LocalHashEmbedder, DEFAULT_DIM};
use consultrag::index::cosine;

#[tokio::main(flavor = "current_thread")]
async fn main() -> Result<(), Box<dyn std::error::Error>> {
    let embedder = LocalHashEmbedder::new(DEFAULT_DIM, 16)?;
    println!("{}", embedder.describe());
    let texts: Vec<String> = [
        "Heating fuels should be taxed according to their carbon content.",
        "Tax heating fuels by carbon content.",
        "Deposit return schemes work well for bottles and cans.",
    ]
    .map(String::from)
    .to_vec();
    let vectors = embed_all(&embedder, &texts).await?;
    for (i, a) in vectors.iter().enumerate() {
        for (j, b) in vectors.iter().enumerate().skip(i + 1) {
            println!("cos(#{i}, #{j}) = {:.3}", cosine(a.vector.values(), b.vector.values())?);
        }
    }
    println!("norm of #0 = {:.12}", vectors[0].vector.norm());
    Ok(())
}

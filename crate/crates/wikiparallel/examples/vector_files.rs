//! The binary vector file format and its sidecar offset table.
//! Run with `cargo run --example vector_files`.

use wikiparallel::builtin_fallback_embed;
use wikiparallel::embed::{
    read_vector_file, write_sidecar, write_vector_file, SeekableVectorFile,
};
use wikiparallel::{ArticleKey, LangCode, SentenceRef};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = tempfile::tempdir()?;
    let vec_path = dir.path().join("sentences.vec");
    let idx_path = dir.path().join("sentences.vec.idx");
    let dimension = 64;

    let en = LangCode::new("en")?;
    let sentences = [
        "She teaches classics at the University of Bayonne.",
        "She was co-founder of the literary magazine.",
        "The magazine covered coastal poetry.",
    ];
    // keys are language<TAB>title<TAB>index
    let records: Vec<(String, Vec<f32>)> = sentences
        .iter()
        .enumerate()
        .map(|(i, text)| {
            let key = SentenceRef::new(ArticleKey::new(en.clone(), "Aurelia Arkotxa"), i as u32);
            let values: Vec<f32> = builtin_fallback_embed(text, dimension)
                .unwrap()
                .into_iter()
                .map(|v| v as f32)
                .collect();
            (key.storage_key(), values)
        })
        .collect();

    let offsets = write_vector_file(
        std::io::BufWriter::new(std::fs::File::create(&vec_path)?),
        dimension,
        &records,
    )?;
    write_sidecar(
        std::io::BufWriter::new(std::fs::File::create(&idx_path)?),
        &offsets,
    )?;
    println!(
        "wrote {} records, {} bytes, sidecar {} bytes",
        records.len(),
        std::fs::metadata(&vec_path)?.len(),
        std::fs::metadata(&idx_path)?.len()
    );

    // full read
    let (dim, back) = read_vector_file(std::io::BufReader::new(std::fs::File::open(&vec_path)?))?;
    println!("reread: dimension {dim}, {} records, bit-identical: {}", back.len(), back == records);

    // seek one record through the sidecar without loading the file
    let seekable = SeekableVectorFile::open(&vec_path, &idx_path)?;
    let key = &records[2].0;
    let values = seekable.get(key)?.expect("known key");
    println!("seeked {key:?}: first coords {:?}", &values[..4]);
    println!("unknown keys return None: {:?}", seekable.get("en\tNope\t0")?);
    Ok(())
}

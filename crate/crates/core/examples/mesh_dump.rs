//! Builds a mesh from a spec and prints its text dump and skeleton counts.
//!
//!     cargo run --example mesh_dump -- "disk 1 2"
use nsk_dg::mesh::Mesh;

fn main() -> nsk_dg::Result<()> {
    let spec = std::env::args().nth(1).unwrap_or_else(|| "rectangle 0 1 0 1 2 2".into());
    let mesh = Mesh::build(&spec.parse().map_err(nsk_dg::Error::InvalidSpec)?)?;
    mesh.write_text(std::io::stdout().lock()).expect("stdout");
    eprintln!(
        "{}: {} elements, {} interior and {} boundary facets, h = {:.4}",
        mesh.label(),
        mesh.num_elements(),
        mesh.interior_facets().len(),
        mesh.boundary_facets().len(),
        mesh.max_diameter()
    );
    Ok(())
}

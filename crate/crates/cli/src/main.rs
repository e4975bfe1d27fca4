//! Command-line front end: build the named triangulations, inspect
//! invariants, enumerate covers, crush edges, build quad surfaces, compute
//! signatures, run the census and produce verification certificates.
//!
//! Exit codes: 0 success, 2 input or validation error, 3 check failure.

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use tricover::census::{enumerate_closed, CensusConstraints};
use tricover::constructions::{
    layered_chain, layered_lens_2k1, layered_lens_4k, twisted_layered_loop,
    twisted_layered_loop_with_labels,
};
use tricover::covers::{build_double_cover, nonzero_classes, verify_cover};
use tricover::homology::{h1_integral, h1_mod2_dimension};
use tricover::isosig::{find_isomorphism, signature};
use tricover::moves::crush_vertex_joining_edge;
use tricover::pipeline::verify_family;
use tricover::skeleton::{skeleton, validate};
use tricover::surfaces::{build_quad_surface, chain_vertical_selection, QuadSelection};
use tricover::Triangulation;

#[derive(Parser)]
#[command(name = "tricover", version, about = "Triangulations, double covers and edge crushing")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Chain,
    Loop,
    Lens4k,
    Lens2k1,
}

#[derive(Subcommand)]
enum Command {
    /// Build a named triangulation and write it in .tri format.
    Build {
        family: Family,
        #[arg(short)]
        k: usize,
        /// Output file; stdout when omitted.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Validation flags, skeleton counts, homology and edge profiles.
    Invariants { file: PathBuf },
    /// List the nonzero Z2 classes and their double covers.
    Covers {
        file: PathBuf,
        /// Write the cover of this class (1-based id from the listing).
        #[arg(long)]
        build: Option<usize>,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Crush a vertex-joining edge of a two-vertex triangulation.
    Crush {
        file: PathBuf,
        /// Edge class id as printed by `invariants`.
        #[arg(long)]
        edge: usize,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Build the quad surface of a selection and print its report.
    Surface {
        file: PathBuf,
        /// One quad of the top-bottom separating type in every
        /// tetrahedron (as built by `build loop`).
        #[arg(long, conflicts_with = "selection")]
        vertical: bool,
        /// JSON file {"quads":[0,1,2,null,...]}, one entry per tetrahedron.
        #[arg(long)]
        selection: Option<PathBuf>,
    },
    /// Print the canonical signature; optionally compare two files.
    Isosig {
        file: PathBuf,
        /// Exit 0 exactly when isomorphic to this triangulation.
        #[arg(long)]
        compare: Option<PathBuf>,
    },
    /// Enumerate closed orientable triangulations with n tetrahedra.
    Census {
        #[arg(short)]
        n: usize,
        #[arg(long)]
        one_vertex: bool,
        /// Permit the long-running n = 4 enumeration.
        #[arg(long)]
        allow_n4: bool,
    },
    /// Verify both families at k (or a sweep), writing certificates.
    Verify {
        #[arg(short, required_unless_present = "sweep")]
        k: Option<usize>,
        /// Inclusive range A..B.
        #[arg(long)]
        sweep: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn read_tri(path: &Path) -> anyhow::Result<Triangulation> {
    let text = std::fs::read_to_string(path)?;
    Ok(Triangulation::parse_tri(&text)?)
}

fn write_out(out: &Option<PathBuf>, content: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => std::fs::write(path, content)?,
        None => print!("{content}"),
    }
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Build { family, k, out } => {
            let tri = match family {
                Family::Chain => layered_chain(k)?.0,
                Family::Loop => twisted_layered_loop(k)?,
                Family::Lens4k => layered_lens_4k(k)?,
                Family::Lens2k1 => layered_lens_2k1(k)?,
            };
            write_out(&out, &tri.to_tri_string())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Invariants { file } => {
            let tri = read_tri(&file)?;
            print_invariants(&tri)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Covers { file, build, out } => {
            let tri = read_tri(&file)?;
            let classes = nonzero_classes(&tri)?;
            if let Some(id) = build {
                if id == 0 || id > classes.len() {
                    anyhow::bail!("class id {id} out of range 1..={}", classes.len());
                }
                let cover = build_double_cover(&tri, &classes[id - 1])?;
                write_out(&out, &cover.total.to_tri_string())?;
                return Ok(ExitCode::SUCCESS);
            }
            #[derive(Serialize)]
            struct ClassRow {
                #[serde(rename = "classId")]
                class_id: usize,
                connected: bool,
                #[serde(rename = "coverH1")]
                cover_h1: String,
                #[serde(rename = "vertexCount")]
                vertex_count: usize,
                #[serde(rename = "tetCount")]
                tet_count: usize,
                verified: bool,
            }
            let mut stdout = std::io::stdout().lock();
            for (i, class) in classes.iter().enumerate() {
                let cover = build_double_cover(&tri, class)?;
                let skel = skeleton(&cover.total);
                let row = ClassRow {
                    class_id: i + 1,
                    connected: cover.is_connected(),
                    cover_h1: h1_integral(&cover.total)?.to_string(),
                    vertex_count: skel.vertex_count(),
                    tet_count: cover.total.tet_count(),
                    verified: verify_cover(&cover),
                };
                writeln!(stdout, "{}", serde_json::to_string(&row)?)?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Crush { file, edge, out } => {
            let tri = read_tri(&file)?;
            let report = crush_vertex_joining_edge(&tri, edge)?;
            eprintln!(
                "crushed edge {} removing {} tetrahedra; {} remain",
                report.crushed_edge,
                report.tetrahedra_removed,
                report.result.tet_count()
            );
            write_out(&out, &report.result.to_tri_string())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Surface { file, vertical, selection } => {
            let tri = read_tri(&file)?;
            let sel = if vertical {
                // files written by `build loop` keep the construction's
                // labeling, so derive the selection from fresh labels
                let (reference, labels) = twisted_layered_loop_with_labels(tri.tet_count())?;
                if reference == tri {
                    chain_vertical_selection(&tri, &labels)?
                } else {
                    QuadSelection::uniform(&tri, 1)
                }
            } else {
                let path = selection
                    .ok_or_else(|| anyhow::anyhow!("need --vertical or --selection FILE"))?;
                #[derive(serde::Deserialize)]
                struct SelFile {
                    quads: Vec<Option<u8>>,
                }
                let sel: SelFile = serde_json::from_str(&std::fs::read_to_string(path)?)?;
                QuadSelection { quads: sel.quads }
            };
            let report = build_quad_surface(&tri, &sel)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Isosig { file, compare } => {
            let tri = read_tri(&file)?;
            let sig = signature(&tri);
            match compare {
                None => {
                    println!("{sig}");
                    Ok(ExitCode::SUCCESS)
                }
                Some(other) => {
                    let other = read_tri(&other)?;
                    if let Some(iso) = find_isomorphism(&tri, &other) {
                        debug_assert!(iso.verifies(&tri, &other));
                        println!("isomorphic {sig}");
                        Ok(ExitCode::SUCCESS)
                    } else {
                        println!("not-isomorphic {sig} {}", signature(&other));
                        Ok(ExitCode::from(3))
                    }
                }
            }
        }
        Command::Census { n, one_vertex, allow_n4 } => {
            let mut constraints = CensusConstraints::orientable_closed();
            if one_vertex {
                constraints.one_vertex = Some(true);
            }
            constraints.allow_long_running = allow_n4;
            let entries = enumerate_closed(n, constraints)?;
            let mut stdout = std::io::stdout().lock();
            for e in &entries {
                writeln!(stdout, "{}", serde_json::to_string(e)?)?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { k, sweep, out } => {
            let range = match (k, sweep) {
                (Some(k), None) => k..=k,
                (None, Some(s)) => {
                    let (a, b) = s
                        .split_once("..")
                        .ok_or_else(|| anyhow::anyhow!("sweep must be A..B"))?;
                    a.parse()?..=b.parse()?
                }
                _ => anyhow::bail!("give either -k K or --sweep A..B"),
            };
            if let Some(dir) = &out {
                std::fs::create_dir_all(dir)?;
            }
            let mut all_pass = true;
            for k in range {
                let cert = verify_family(k)?;
                if let Some(dir) = &out {
                    std::fs::write(dir.join(format!("certificate-k{k}.json")), cert.to_json())?;
                }
                if cert.pass {
                    println!("k={k}: PASS (crush {} -> {} tets, H1 {})",
                        cert.loop_side.cover.tet_count,
                        cert.inequality_witness.crush_tet_count,
                        cert.loop_side.crushes[0].result_h1);
                } else {
                    all_pass = false;
                    println!("k={k}: FAIL ({})", cert.first_failure.as_deref().unwrap_or("?"));
                }
            }
            Ok(if all_pass { ExitCode::SUCCESS } else { ExitCode::from(3) })
        }
    }
}

fn print_invariants(tri: &Triangulation) -> anyhow::Result<()> {
    let skel = skeleton(tri);
    let report = validate(tri);
    #[derive(Serialize)]
    struct EdgeRow {
        id: usize,
        degree: usize,
        #[serde(rename = "tetCount")]
        tet_count: usize,
        #[serde(rename = "endpointsDistinct")]
        endpoints_distinct: bool,
        boundary: bool,
    }
    #[derive(Serialize)]
    struct Out {
        closed: bool,
        orientable: bool,
        #[serde(rename = "edgeValid")]
        edge_valid: bool,
        #[serde(rename = "vertexLinksValid")]
        vertex_links_valid: bool,
        pass: bool,
        #[serde(rename = "tetCount")]
        tets: usize,
        vertices: usize,
        edges: usize,
        faces: usize,
        #[serde(rename = "boundaryFaces")]
        boundary_faces: usize,
        h1: Option<String>,
        #[serde(rename = "h1Mod2Dimension")]
        h1_mod2: Option<usize>,
        #[serde(rename = "edgeProfiles")]
        edge_profiles: Vec<EdgeRow>,
    }
    let valid = report.is_valid();
    let out = Out {
        closed: report.closed,
        orientable: report.orientable,
        edge_valid: report.edge_valid,
        vertex_links_valid: report.vertex_links_valid,
        pass: report.pass(),
        tets: tri.tet_count(),
        vertices: skel.vertex_count(),
        edges: skel.edge_count(),
        faces: skel.face_count(),
        boundary_faces: tri.boundary_faces().len(),
        h1: if valid {
            Some(h1_integral(tri)?.to_string())
        } else {
            None
        },
        h1_mod2: if valid {
            Some(h1_mod2_dimension(tri)?)
        } else {
            None
        },
        edge_profiles: skel
            .edges
            .iter()
            .enumerate()
            .map(|(id, e)| EdgeRow {
                id,
                degree: e.degree,
                tet_count: e.tet_count,
                endpoints_distinct: e.endpoints_distinct(),
                boundary: e.on_boundary,
            })
            .collect(),
    };
    println!("{}", serde_json::to_string_pretty(&out)?);
    Ok(())
}

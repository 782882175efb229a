use clap::{Parser, Subcommand, ValueEnum};
use gengeo_cli::commands;
use gengeo_cli::report::Format;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "gengeo",
    about = "Exact verifier for generalized contact, complex, metric and coKähler structures on invariant frames"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Default, ValueEnum)]
enum FormatArg {
    #[default]
    Text,
    Json,
}

impl From<FormatArg> for Format {
    fn from(value: FormatArg) -> Format {
        match value {
            FormatArg::Text => Format::Text,
            FormatArg::Json => Format::Json,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check every axiom and classify the structure in a document.
    Verify {
        path: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        format: FormatArg,
        /// Force (true) or forbid (false) the frame's twisting three-form;
        /// the default uses it when present.
        #[arg(long)]
        twisted: Option<bool>,
    },
    /// Build the product of two contact metric documents and decide the
    /// Kähler conditions for the induced pair.
    Product {
        path_a: PathBuf,
        path_b: PathBuf,
        /// Write the induced pair as a gcx_pair document.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t)]
        format: FormatArg,
        #[arg(long)]
        twisted: Option<bool>,
    },
    /// Shear a document by a closed two-form and write the transformed
    /// structure.
    Btransform {
        path: PathBuf,
        bform: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Work with the built-in instances.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    /// List every instance with a one-line description.
    List,
    /// Write one instance as a document.
    Emit { id: String, path: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Verify { path, format, twisted } => {
            commands::cmd_verify(&path, format.into(), twisted)
        }
        Command::Product { path_a, path_b, out, format, twisted } => {
            commands::cmd_product(&path_a, &path_b, out.as_deref(), format.into(), twisted)
        }
        Command::Btransform { path, bform, out } => {
            commands::cmd_btransform(&path, &bform, &out)
        }
        Command::Catalog { action } => match action {
            CatalogAction::List => commands::cmd_catalog_list(),
            CatalogAction::Emit { id, path } => commands::cmd_catalog_emit(&id, &path),
        },
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(error) => {
            eprintln!("error: {error}");
            ExitCode::from(error.exit)
        }
    }
}

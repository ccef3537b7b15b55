use clap::{Parser, Subcommand, ValueEnum};
use prismslice::slice::RingKind;
use prismslice_cli::{
    cmd_legendre, cmd_prism_verify, cmd_rsss, cmd_slice_filtration, cmd_witt, CliResult, Format,
    PrismVerifyOptions,
};

#[derive(Parser)]
#[command(
    name = "prismslice",
    about = "q-analogue, Witt-vector and prism calculus with slice-filtration charts",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Svg,
    Txt,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Format {
        match f {
            FormatArg::Svg => Format::Svg,
            FormatArg::Txt => Format::Txt,
            FormatArg::Json => Format::Json,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum RingArg {
    Torsionfree,
    Fp,
}

#[derive(Clone, Copy, ValueEnum)]
enum PageArg {
    E2,
    Einf,
}

#[derive(Clone, Copy, ValueEnum)]
enum GradingArg {
    Lambda,
    Even,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Qcrys,
    Perfq,
    Crys,
    Kisin,
}

#[derive(Subcommand)]
enum Command {
    /// Emit the q-Legendre stacked-bar figure
    Legendre {
        #[arg(long, default_value_t = 2)]
        p: u64,
        #[arg(long = "n-max", default_value_t = 16)]
        n_max: u64,
        #[arg(long, value_enum, default_value_t = FormatArg::Txt)]
        format: FormatArg,
    },
    /// Emit a page of the regular slice spectral sequence
    Rsss {
        #[arg(long, default_value_t = 2)]
        p: u64,
        #[arg(long, value_enum, default_value_t = RingArg::Torsionfree)]
        ring: RingArg,
        #[arg(long, value_enum, default_value_t = PageArg::E2)]
        page: PageArg,
        #[arg(long = "max-col", default_value_t = 16)]
        max_col: i64,
        #[arg(long = "max-row", default_value_t = 16)]
        max_row: i64,
        #[arg(long, value_enum, default_value_t = FormatArg::Txt)]
        format: FormatArg,
    },
    /// Table of slice-filtration generators on homotopy
    SliceFiltration {
        #[arg(long, default_value_t = 2)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        i: u64,
        #[arg(long = "j-max", default_value_t = 6)]
        j_max: i64,
        #[arg(long, value_enum, default_value_t = GradingArg::Lambda)]
        grading: GradingArg,
    },
    /// Run the prism verification report
    PrismVerify {
        #[arg(long, value_enum, default_value_t = ModelArg::Qcrys)]
        model: ModelArg,
        #[arg(long, default_value_t = 2)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        depth: u32,
        #[arg(long, default_value_t = 3)]
        imax: u32,
        #[arg(long, default_value_t = 3)]
        jmax: u32,
        #[arg(long = "prec-n")]
        prec_n: Option<u32>,
        #[arg(long = "prec-m")]
        prec_m: Option<u32>,
    },
    /// Witt-vector arithmetic over small bases (zmod:p^k or fpx:p,m)
    Witt {
        #[arg(long)]
        base: String,
        /// One of add, mul, ghost, norm, check
        op: String,
        /// Coordinate vectors (comma-separated; fpx polynomials split by ';')
        args: Vec<String>,
    },
}

fn finish(result: CliResult) -> ! {
    match result {
        Ok(out) => {
            print!("{out}");
            std::process::exit(0);
        }
        Err(e) => {
            eprintln!("{}", e.message());
            std::process::exit(e.exit_code());
        }
    }
}

fn main() {
    let cli = Cli::parse();
    match cli.command {
        Command::Legendre { p, n_max, format } => finish(cmd_legendre(p, n_max, format.into())),
        Command::Rsss {
            p,
            ring,
            page,
            max_col,
            max_row,
            format,
        } => {
            let ring = match ring {
                RingArg::Torsionfree => RingKind::Torsionfree,
                RingArg::Fp => RingKind::Fp,
            };
            let page = match page {
                PageArg::E2 => "e2",
                PageArg::Einf => "einf",
            };
            finish(cmd_rsss(p, ring, page, max_col, max_row, format.into()))
        }
        Command::SliceFiltration { p, i, j_max, grading } => {
            let grading = match grading {
                GradingArg::Lambda => "lambda",
                GradingArg::Even => "even",
            };
            finish(cmd_slice_filtration(p, i, j_max, grading))
        }
        Command::PrismVerify {
            model,
            p,
            depth,
            imax,
            jmax,
            prec_n,
            prec_m,
        } => {
            let model = match model {
                ModelArg::Qcrys => "qcrys",
                ModelArg::Perfq => "perfq",
                ModelArg::Crys => "crys",
                ModelArg::Kisin => "kisin",
            };
            finish(cmd_prism_verify(&PrismVerifyOptions {
                model: model.to_string(),
                p,
                depth,
                imax,
                jmax,
                prec_n,
                prec_m,
            }))
        }
        Command::Witt { base, op, args } => finish(cmd_witt(&base, &op, &args)),
    }
}

# src\deadcore_app\cli.py

import argparse
import sys
from pathlib import Path
from typing import List, Optional

from .core.pipeline import ExperimentPipeline
from .core.utils.errors import NumericalFailure
from .persistence import ConfigLoader, RunCatalog

EXIT_OK = 0
EXIT_NUMERICAL = 1
EXIT_USAGE = 2


def _print_progress(step: int, total: int, title: str):
    print(f"[{step}/{total}] {title}")


def _print_error(message: str):
    print(message, file=sys.stderr)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=str, default=None, help="arquivo de configuração (.cfg)")
    common.add_argument("--out", type=str, default=".", help="diretório de saída (deve existir)")
    common.add_argument("--seed", type=int, default=None, help="semente das suítes aleatórias")
    mode = common.add_mutually_exclusive_group()
    mode.add_argument("--sequential", dest="parallel", action="store_false", help="execução sequencial (padrão)")
    mode.add_argument("--parallel", dest="parallel", action="store_true", help="casos independentes em paralelo")
    common.set_defaults(parallel=False)

    parser = argparse.ArgumentParser(
        prog="deadcore",
        description="Laboratório numérico de núcleos mortos e equações de Hénon.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "verify-exact": "suíte de resíduos das soluções exatas",
        "solve-radial": "solver radial 1D (sistema ou Hénon)",
        "solve-grid": "sistema de núcleo morto na grade 2D com continuação em ε",
        "solve-henon": "equação de Hénon na grade 2D e verificações",
        "fit": "ajuste de crescimento num campo salvo",
        "liouville": "limiar de Liouville e verificação de decaimento",
        "blowup": "reescalas de blow-up da família exata",
    }
    for name in ExperimentPipeline.COMMANDS:
        sub.add_parser(name, parents=[common], help=helps[name])
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)

    out = Path(args.out)
    if not out.is_dir():
        _print_error(f"Diretório de saída inexistente: {out}")
        return EXIT_USAGE

    try:
        config = ConfigLoader.load(args.config) if args.config else ConfigLoader.defaults()
        catalog = RunCatalog(out)
    except ValueError as e:
        _print_error(f"Erro de configuração: {e}")
        return EXIT_USAGE

    base_name = config.get("run", "name") if config.has("run", "name") else args.command.replace("-", "_")
    run_name = catalog.unique_run_name(base_name)

    pipeline = ExperimentPipeline(config, out, run_name, args.seed, args.parallel)
    pipeline.progress_update.connect(_print_progress)
    pipeline.run_error.connect(_print_error)

    try:
        pipeline.run(args.command)
        code = EXIT_OK
    except ValueError as e:
        _print_error(f"Erro de validação: {e}")
        code = EXIT_USAGE
    except NumericalFailure as e:
        _print_error(f"Falha numérica: {e}")
        code = EXIT_NUMERICAL

    status = "concluido" if code == EXIT_OK else "falhou"
    catalog.register_run(run_name, args.command, status, code, pipeline.artifacts)
    return code


if __name__ == "__main__":
    sys.exit(main())

# src\deadcore_app\persistence\config_loader.py

import configparser
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Optional, Tuple, Union

from ..core.numerics import OperatorSpec, RadialSolverConfig, SolveConfig
from ..core.theory import HenonParams, OperatorKind, SystemParams
from ..core.utils import ConfigFieldsManager
from ..core.utils.errors import ConfigError


@dataclass
class ExperimentConfig:
    """
    Configuração de um experimento: valores tipados por seção, já
    completados com os padrões do schema.
    """
    values: Dict[str, Dict[str, object]]
    source: Optional[str] = None
    explicit: Dict[str, set] = field(default_factory=dict)

    def section(self, name: str) -> Dict[str, object]:
        if name not in self.values:
            raise ConfigError(f"Seção desconhecida: [{name}]")
        return self.values[name]

    def get(self, section: str, key: str):
        sec = self.section(section)
        if key not in sec:
            raise ConfigError(f"Chave desconhecida: [{section}] {key}")
        return sec[key]

    def has(self, section: str, key: Optional[str] = None) -> bool:
        """Se a seção (ou a chave) foi escrita explicitamente no arquivo."""
        keys = self.explicit.get(section)
        if keys is None:
            return False
        return True if key is None else key in keys

    def set(self, section: str, key: str, value):
        ConfigFieldsManager.get_section_fields(section)
        self.values[section][key] = value

    # --- Construtores dos objetos de domínio ---

    def system_params(self) -> SystemParams:
        s, op = self.section("system"), self.section("operator")
        return SystemParams(s["p"], s["q"], s["lambda1"], s["lambda2"], op["ell_lo"], op["ell_hi"], s["n"])

    def henon_params(self) -> HenonParams:
        s, op = self.section("henon"), self.section("operator")
        return HenonParams(s["p"], s["mu"], s["alpha"], op["ell_lo"], op["ell_hi"], s["n"], s["critical"])

    def operator_spec(self) -> OperatorSpec:
        op = self.section("operator")
        try:
            kind = OperatorKind(op["kind"])
        except ValueError:
            raise ConfigError(f"Operador desconhecido: '{op['kind']}'") from None
        return OperatorSpec(kind, op["ell_lo"], op["ell_hi"])

    def solve_config(self) -> SolveConfig:
        s = self.section("solver")
        dt = s["pseudo_dt"]
        if dt != "auto":
            try:
                dt = float(dt)
            except ValueError:
                raise ConfigError(f"pseudo_dt inválido: '{dt}'") from None
        return SolveConfig(
            epsilon=s["epsilon"],
            delta=s["delta"],
            tol=s["tol"],
            max_iter=s["max_iter"],
            damping=s["damping"],
            pseudo_dt=dt,
            scheme=s["scheme"],
            jacobian_floor=s["jacobian_floor"],
            line_search_steps=s["line_search_steps"],
            log_every=s["log_every"],
        )

    def radial_config(self) -> RadialSolverConfig:
        r = self.section("radial")
        if r["method"] not in ("newton", "picard"):
            raise ConfigError(f"Método radial desconhecido: '{r['method']}'")
        if r["damping"] is not None and not 0 < r["damping"] <= 1:
            raise ConfigError(f"[radial] damping deve estar em (0, 1], recebido {r['damping']}.")
        if r["delta"] is not None and not r["delta"] > 0:
            raise ConfigError(f"[radial] delta deve ser positivo, recebido {r['delta']}.")
        return RadialSolverConfig(method=r["method"], damping=r["damping"], delta=r["delta"],
                                  fb_factor=r["fb_factor"])

    def boundary(self) -> Tuple[float, float]:
        b = self.section("boundary")
        return b["u"], b["v"]

    def analysis_tol(self) -> float:
        """Limiar da fronteira livre: padrão 10·tol do solver."""
        tol = self.get("analysis", "tol")
        return 10.0 * self.get("solver", "tol") if tol is None else tol


class ConfigLoader:
    """
    Leitura estrita dos arquivos de configuração (seções entre colchetes,
    linhas key = value). Seções e chaves desconhecidas são rejeitadas.
    """

    @staticmethod
    def defaults() -> ExperimentConfig:
        return ExperimentConfig({s: ConfigFieldsManager.defaults(s) for s in ConfigFieldsManager.sections()})

    @staticmethod
    def from_string(text: str, source: Optional[str] = None) -> ExperimentConfig:
        parser = configparser.ConfigParser(interpolation=None, strict=True)
        try:
            parser.read_string(text, source=source or "<string>")
        except configparser.Error as e:
            raise ConfigError(f"Erro de sintaxe na configuração: {e}") from None

        if parser.defaults():
            raise ConfigError("Seção [DEFAULT] não é suportada.")

        cfg = ConfigLoader.defaults()
        cfg.source = source
        for section in parser.sections():
            known = ConfigFieldsManager.get_section_fields(section)
            cfg.explicit[section] = set()
            for key, raw in parser.items(section):
                if key not in known:
                    raise ConfigError(f"Chave desconhecida: [{section}] {key}")
                cfg.values[section][key] = ConfigFieldsManager.coerce(section, key, raw)
                cfg.explicit[section].add(key)
        return cfg

    @staticmethod
    def load(path: Union[str, Path]) -> ExperimentConfig:
        path = Path(path)
        if not path.is_file():
            raise ConfigError(f"Arquivo de configuração não encontrado: {path}")
        print(f"Configuração carregada de: {path}")
        return ConfigLoader.from_string(path.read_text(encoding="utf-8"), str(path))

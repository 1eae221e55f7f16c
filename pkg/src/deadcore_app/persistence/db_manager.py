# src\deadcore_app\persistence\db_manager.py

import json
import sqlite3
import datetime
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

from PySide6.QtCore import QObject


class RunCatalog(QObject):
    """
    Gerencia o banco de dados de catálogo (SQLite) que registra as
    execuções da linha de comando e seus artefatos.
    """
    DB_NAME = "catalog.db"
    STATUSES = ("concluido", "falhou")

    def __init__(self, out_dir: Union[str, Path], parent=None):
        super().__init__(parent)
        self.out_dir = Path(out_dir)
        self.DB_PATH = self.out_dir / self.DB_NAME
        self._create_catalog_table()

    def _get_connection(self):
        """Retorna uma nova conexão SQLite."""
        return sqlite3.connect(self.DB_PATH)

    def _create_catalog_table(self):
        query = """
        CREATE TABLE IF NOT EXISTS Runs (
            id INTEGER PRIMARY KEY AUTOINCREMENT,
            run_name TEXT NOT NULL UNIQUE,
            command TEXT NOT NULL,
            status TEXT NOT NULL CHECK(status IN ('concluido', 'falhou')),
            created_at TIMESTAMP NOT NULL,
            exit_code INTEGER NOT NULL,
            artifacts TEXT NOT NULL
        );
        """
        try:
            with self._get_connection() as conn:
                conn.execute(query)
                conn.commit()
        except Exception as e:
            print(f"Erro ao criar tabela de catálogo: {e}")
            raise

    def unique_run_name(self, base_name: str) -> str:
        """
        Retorna um run_name ainda não registrado; se `base_name` já existir,
        acrescenta um sufixo numérico incremental.
        """
        taken = {row[0] for row in self._fetch("SELECT run_name FROM Runs")}
        if base_name not in taken:
            return base_name
        counter = 1
        while f"{base_name}{counter}" in taken:
            counter += 1
        return f"{base_name}{counter}"

    def register_run(self, run_name: str, command: str, status: str, exit_code: int,
                     artifacts: List[str]) -> int:
        """Salva um novo registro no catálogo."""
        if status not in self.STATUSES:
            raise ValueError(f"Status inválido: {status}")
        query = """
        INSERT INTO Runs (run_name, command, status, created_at, exit_code, artifacts)
        VALUES (?, ?, ?, ?, ?, ?)
        """
        timestamp = datetime.datetime.now().isoformat(sep=" ", timespec="seconds")
        try:
            with self._get_connection() as conn:
                cursor = conn.cursor()
                cursor.execute(query, (run_name, command, status, timestamp, exit_code,
                                       json.dumps([str(a) for a in artifacts])))
                conn.commit()
                run_id = cursor.lastrowid
                print(f"Registro '{status}' (ID: {run_id}) salvo no catálogo.")
                return run_id
        except Exception as e:
            print(f"Erro ao salvar registro no catálogo: {e}")
            raise

    def _fetch(self, query: str, args: Tuple = ()) -> List[Tuple]:
        with self._get_connection() as conn:
            return conn.execute(query, args).fetchall()

    def get_runs_by_status(self, status: str) -> List[Tuple]:
        """Retorna (id, run_name, command, created_at) filtrados pelo status."""
        return self._fetch(
            "SELECT id, run_name, command, created_at FROM Runs WHERE status = ? ORDER BY id",
            (status,),
        )

    def get_run(self, run_id: int) -> Optional[Dict]:
        rows = self._fetch(
            "SELECT run_name, command, status, exit_code, artifacts FROM Runs WHERE id = ?",
            (run_id,),
        )
        if not rows:
            return None
        name, command, status, exit_code, artifacts = rows[0]
        return {
            "run_name": name,
            "command": command,
            "status": status,
            "exit_code": exit_code,
            "artifacts": json.loads(artifacts),
        }

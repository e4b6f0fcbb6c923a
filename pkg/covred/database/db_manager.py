"""
Database Manager Module
إدارة قاعدة بيانات SQLite لحفظ التقارير ومكونات الرسوم الثنائية
"""

import sqlite3
import json
from pathlib import Path
from typing import List, Dict, Optional, Any
import logging

logger = logging.getLogger(__name__)


class DatabaseManager:
    """
    مدير قاعدة البيانات SQLite
    يحفظ تقارير التصنيف والتحقق مع مكونات كل نموذج
    """

    def __init__(self, db_path: str = "data/covred.db"):
        """
        تهيئة مدير قاعدة البيانات

        Args:
            db_path: مسار قاعدة البيانات
        """
        self.db_path = Path(db_path)
        self.db_path.parent.mkdir(parents=True, exist_ok=True)
        self._connection: Optional[sqlite3.Connection] = None
        self.init_database()

    def get_connection(self) -> sqlite3.Connection:
        """اتصال واحد يُفتح عند أول استعمال؛ الصفوف تُقرأ بأسماء الأعمدة"""
        if self._connection is None:
            self._connection = sqlite3.connect(str(self.db_path))
            self._connection.row_factory = sqlite3.Row
        return self._connection

    def init_database(self):
        """تهيئة قاعدة البيانات وإنشاء الجداول"""
        try:
            connection = self.get_connection()
            cursor = connection.cursor()

            # جدول التشغيلات
            cursor.execute("""
                CREATE TABLE IF NOT EXISTS runs (
                    id INTEGER PRIMARY KEY AUTOINCREMENT,
                    command TEXT NOT NULL,
                    input JSON NOT NULL,
                    report JSON NOT NULL,
                    verdict TEXT,
                    created_at TIMESTAMP DEFAULT CURRENT_TIMESTAMP
                )
            """)

            # جدول المكونات
            cursor.execute("""
                CREATE TABLE IF NOT EXISTS components (
                    id INTEGER PRIMARY KEY AUTOINCREMENT,
                    run_id INTEGER NOT NULL,
                    model INTEGER NOT NULL DEFAULT 0,
                    side TEXT NOT NULL,
                    name TEXT NOT NULL,
                    label TEXT,
                    FOREIGN KEY (run_id) REFERENCES runs(id)
                )
            """)

            connection.commit()
            logger.info("Database initialized successfully")

        except sqlite3.Error as e:
            logger.error(f"Database initialization error: {e}")
            raise

    def save_run(self, command: str, input_data: Dict[str, Any], report: Dict[str, Any],
                 verdict: Optional[str] = None) -> int:
        """
        حفظ تقرير تشغيل مع مكونات نماذجه

        Args:
            command: الأمر (classify/verify)
            input_data: المدخلات كما قُرئت
            report: التقرير الكامل
            verdict: AGREE/DISAGREE إن وجد

        Returns:
            معرف التشغيل
        """
        try:
            connection = self.get_connection()
            cursor = connection.cursor()
            cursor.execute("""
                INSERT INTO runs (command, input, report, verdict)
                VALUES (?, ?, ?, ?)
            """, (
                command,
                json.dumps(input_data, ensure_ascii=False, sort_keys=True),
                json.dumps(report, ensure_ascii=False, sort_keys=True),
                verdict,
            ))
            run_id = cursor.lastrowid

            for index, model in enumerate(report.get("models", [])):
                for side, key in (("X", "X_k"), ("Y", "Y_k")):
                    for comp in model.get(key, {}).get("components", []):
                        label = comp.get("label")
                        cursor.execute("""
                            INSERT INTO components (run_id, model, side, name, label)
                            VALUES (?, ?, ?, ?, ?)
                        """, (run_id, index, side, comp["name"],
                              json.dumps(label, sort_keys=True) if label else None))
            connection.commit()
            logger.info(f"Stored {command} run {run_id}")
            return run_id
        except sqlite3.Error as e:
            logger.error(f"Error saving run: {e}")
            raise

    def list_runs(self, command: Optional[str] = None, limit: int = 100) -> List[Dict]:
        """
        قائمة التشغيلات الأحدث أولاً

        Args:
            command: تصفية حسب الأمر
            limit: عدد النتائج
        """
        try:
            cursor = self.get_connection().cursor()
            if command:
                cursor.execute("""
                    SELECT id, command, verdict, created_at FROM runs
                    WHERE command = ?
                    ORDER BY id DESC
                    LIMIT ?
                """, (command, limit))
            else:
                cursor.execute("""
                    SELECT id, command, verdict, created_at FROM runs
                    ORDER BY id DESC
                    LIMIT ?
                """, (limit,))
            return [dict(row) for row in cursor.fetchall()]
        except sqlite3.Error as e:
            logger.error(f"Error listing runs: {e}")
            raise

    def get_run(self, run_id: int) -> Optional[Dict]:
        """
        استرجاع تشغيل كامل

        Returns:
            بيانات التشغيل والمكونات، أو None
        """
        try:
            cursor = self.get_connection().cursor()
            cursor.execute("SELECT * FROM runs WHERE id = ?", (run_id,))
            run = cursor.fetchone()
            if not run:
                return None

            cursor.execute("""
                SELECT model, side, name, label FROM components
                WHERE run_id = ?
                ORDER BY model, side, name
            """, (run_id,))
            components = [dict(row) for row in cursor.fetchall()]

            data = dict(run)
            data["input"] = json.loads(data["input"])
            data["report"] = json.loads(data["report"])
            return {"run": data, "components": components}
        except sqlite3.Error as e:
            logger.error(f"Error retrieving run: {e}")
            raise

    def close(self):
        if self._connection is not None:
            self._connection.close()
            self._connection = None

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        self.close()

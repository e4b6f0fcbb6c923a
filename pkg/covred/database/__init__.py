"""Database module for covred"""

from covred.database.db_manager import DatabaseManager

__all__ = ['DatabaseManager']

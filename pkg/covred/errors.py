"""
Error hierarchy for covred
أخطاء مكتبة اختزال التغطيات

Library code raises; only covred.cli maps an error to an exit code.
"""

from typing import Optional


class CoverReductionError(Exception):
    """الخطأ الأساسي لكل أخطاء المكتبة"""

    exit_code = 1


# --- valued field ---

class DivisionByZero(CoverReductionError, ZeroDivisionError):
    """القسمة على عنصر صفري"""


class NegativeValuation(CoverReductionError):
    """باقي عنصر ذي تقييم سالب"""


class NotRepresentable(CoverReductionError):
    """
    تقييم خارج الشبكة (1/e)Z

    Attributes:
        denominator: المقام الذي يجب أن يقسم e
        required_e: أصغر دليل تفرع يحتوي على التقييم المطلوب
    """

    exit_code = 4

    def __init__(self, message: str, denominator: int, required_e: int):
        super().__init__(message)
        self.denominator = denominator
        self.required_e = required_e


class ZeroPolynomial(CoverReductionError):
    """كثير حدود صفري حيث يُطلب غير صفري"""


class PreconditionViolated(CoverReductionError):
    """شرط مسبق غير محقق"""


# --- covers ---

class InvalidDivisor(CoverReductionError):
    """قاسم حرج لا يحقق مجموع (m-1) = p-1"""

    exit_code = 3


class RHViolation(CoverReductionError):
    """خرق صيغة ريمان-هورفيتز"""


class NotEnoughBranchPoints(CoverReductionError):
    """أقل من قيمتي تفرع منتهيتين"""


class NeedsExtension(CoverReductionError):
    """
    التطبيع يحتاج امتداداً للحقل

    Attributes:
        required_e: دليل التفرع المطلوب
    """

    exit_code = 4

    def __init__(self, message: str, required_e: int):
        super().__init__(message)
        self.required_e = required_e


# --- branch tree ---

class AllPointsCoalesce(CoverReductionError):
    """كل نقاط التفرع لها نفس الباقي"""


class VertexNotFound(CoverReductionError, KeyError):
    """رأس غير موجود في الشجرة"""


# --- classifier ---

class NotOrdinary(CoverReductionError):
    """نقطة تفرع ليست عادية"""


class BadReduction(CoverReductionError):
    """مجموعة التفرع ليس لها اختزال جيد"""


class TooFewBranchPoints(CoverReductionError):
    """r < 3"""


class NotSimpleTail(CoverReductionError):
    """الزوج ليس ذيلاً بسيطاً"""


class ThresholdUndefined(CoverReductionError):
    """العتبة p/(n1+n2-p-1) غير معرفة"""


class InadmissiblePartition(CoverReductionError):
    """تقسيم غير مقبول لمضاعفات الألياف"""


class NotSimpleReduction(CoverReductionError):
    """
    مجموعة التفرع ليس لها اختزال بسيط

    Attributes:
        cluster: الرأس المخالف في الشجرة
    """

    exit_code = 2

    def __init__(self, message: str, cluster: Optional[str] = None):
        super().__init__(message)
        self.cluster = cluster


# --- oracle ---

class IntegralityFailed(CoverReductionError):
    """النموذج الأساسي غير متكامل أو اختزاله ليس X^p"""


class CenterNotRoot(CoverReductionError):
    """مركز التفجير ليس جذراً لكثير الحدود المتبقي"""


class NonIntegral(CoverReductionError):
    """قيمة التفرع المزاحة ليست في حلقة التقييم"""


class ResidualRootOutsideFp(CoverReductionError):
    """جذر متبقٍ خارج الحقل F_p يحمل عنقوداً غير منفصل"""

    exit_code = 4


class NonTermination(CoverReductionError):
    """تجاوز عمق التفجير المسموح"""

    exit_code = 4


# --- cli ---

class SchemaError(CoverReductionError):
    """ملف إدخال غير صالح"""

    exit_code = 3

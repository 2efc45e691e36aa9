from django.db import models
from django.utils import timezone


class CatalogBuild(models.Model):
    class Status(models.TextChoices):
        RUNNING = "RUNNING", "RUNNING"
        BUILT = "BUILT", "BUILT"
        VERIFIED = "VERIFIED", "VERIFIED"
        FAILED = "FAILED", "FAILED"

    field_tag = models.CharField(max_length=16, db_index=True)
    path = models.CharField(max_length=512, blank=True, default="")
    sha256 = models.CharField(max_length=64, blank=True, default="")

    status = models.CharField(max_length=16, choices=Status.choices, default=Status.RUNNING)
    summary = models.CharField(max_length=255, blank=True, default="")
    entry_count = models.IntegerField(default=0)
    sections = models.JSONField(default=dict, blank=True)  # section name -> entry count
    error_count = models.IntegerField(default=0)
    duration_ms = models.IntegerField(null=True, blank=True)

    meta = models.JSONField(default=dict, blank=True)  # precision, seed, budget
    created_at = models.DateTimeField(auto_now_add=True)

    def __str__(self):
        return f"{self.field_tag} {self.status} ({self.entry_count} entries)"


class ClassificationRun(models.Model):
    class Status(models.TextChoices):
        RECEIVED = "RECEIVED", "RECEIVED"
        CLASSIFIED = "CLASSIFIED", "CLASSIFIED"
        FAILED = "FAILED", "FAILED"

    field_tag = models.CharField(max_length=16, db_index=True)
    curve = models.CharField(max_length=512)
    gen_poly = models.CharField(max_length=64, blank=True, default="")
    timestamp = models.DateTimeField(default=timezone.now, db_index=True)

    status = models.CharField(max_length=16, choices=Status.choices, default=Status.RECEIVED)
    label = models.CharField(max_length=64, blank=True, default="", db_index=True)
    kind = models.CharField(max_length=32, blank=True, default="")
    conductor = models.IntegerField(null=True, blank=True)
    e = models.IntegerField(null=True, blank=True)
    summary = models.CharField(max_length=255, blank=True, default="")
    error_count = models.IntegerField(default=0)
    duration_ms = models.IntegerField(null=True, blank=True)

    record = models.JSONField(null=True, blank=True)
    catalog = models.ForeignKey(CatalogBuild, related_name="runs", null=True, blank=True, on_delete=models.SET_NULL)
    meta = models.JSONField(default=dict, blank=True)

    created_at = models.DateTimeField(auto_now_add=True)

    @property
    def review_required(self) -> bool:
        if self.status == self.Status.FAILED:
            return True
        if self.error_count:
            return True
        return self.steps.filter(status__in=["WARN", "ERROR"]).exists()

    def __str__(self):
        return f"{self.field_tag} {self.curve} {self.label or self.status}"


class RunStep(models.Model):
    class StepStatus(models.TextChoices):
        OK = "OK", "OK"
        WARN = "WARN", "WARN"
        ERROR = "ERROR", "ERROR"

    run = models.ForeignKey(ClassificationRun, related_name="steps", on_delete=models.CASCADE)
    sequence = models.IntegerField()

    step_name = models.CharField(max_length=64)      # tate / twist / defect / link / check
    status = models.CharField(max_length=8, choices=StepStatus.choices, default=StepStatus.OK)

    message = models.CharField(max_length=255, blank=True, default="")
    details = models.JSONField(default=dict, blank=True)

    created_at = models.DateTimeField(auto_now_add=True)

    class Meta:
        ordering = ["sequence"]
        indexes = [
            models.Index(fields=["run", "sequence"], name="runstep_run_seq_idx"),
        ]

    def __str__(self):
        return f"run {self.run_id} #{self.sequence} {self.step_name} {self.status}"

"""Record types shared by the estimators, selection and benchmark."""

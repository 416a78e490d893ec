#pragma once

#include <memory>
#include <string>

#include "mskel/mesh.hpp"
#include "mskel/morphology.hpp"
#include "mskel/vec.hpp"

namespace mskel {

struct SkeletonErrorStats {
  double mean = 0.0;
  double max = 0.0;
};

// An analytic solid with a watertight tessellation and closed-form inside /
// distance queries, used as ground truth by the tests.
class AnalyticShape {
 public:
  virtual ~AnalyticShape() = default;
  virtual std::string name() const = 0;
  virtual TriangleMesh generate_mesh() const = 0;
  virtual bool contains(const Vec3& p) const = 0;
  // Unsigned distance to the analytic surface.
  virtual double surface_distance(const Vec3& p) const = 0;
  virtual bool has_analytic_skeleton() const { return true; }
  // Distance to the closed-form skeleton. Throws if has_analytic_skeleton()
  // is false.
  virtual double skeleton_distance(const Vec3& p) const = 0;
  // Upper bound on the gap between the analytic surface and the tessellation.
  virtual double tessellation_deviation() const = 0;
};

std::unique_ptr<AnalyticShape> make_sphere(double radius, int subdiv);
// Full edge lengths a x b x c, centered at the origin.
std::unique_ptr<AnalyticShape> make_box(double a, double b, double c);
std::unique_ptr<AnalyticShape> make_torus(double major_radius, double minor_radius,
                                          int res_major, int res_minor);
// Cylinder of the given height with hemispherical caps; total length height + 2r.
std::unique_ptr<AnalyticShape> make_capsule(double radius, double height, int res);
// Cylinder with one thin radial fin running the full height; the fin raises
// the profile radius by up to fin_height over a narrow angular window. Used
// as a shape with an intricate region; it has no closed-form skeleton.
std::unique_ptr<AnalyticShape> make_fin_cylinder(double radius, double height,
                                                 double fin_height, int res);

// Parses "sphere:r=1,subdiv=4", "box:a=2,b=1,c=1", "torus:R=1,r=0.3,res=200x50",
// "capsule:r=0.3,h=1,res=64", "fin_cylinder:r=0.4,h=1.6,fin=0.25,res=192".
// Omitted keys take the defaults shown above.
std::unique_ptr<AnalyticShape> parse_shape_spec(const std::string& spec);

// Mean and max of skeleton_distance over all sphere centers.
SkeletonErrorStats analytic_skeleton_error(const AnalyticShape& shape,
                                           const Skeleton& skeleton);

}  // namespace mskel
